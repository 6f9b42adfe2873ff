"""Classical mode functions and Floquet stability.

A mode function is a complex solution xi(t) of

    xi'' + 2 g(t) xi = 0,     W(xi, conj xi) = xi conj(xi') - xi' conj(xi) = -i.

From it the wavefunctions need phi = 2|xi|^2, its derivative, and a continuous
branch theta of arg xi.  The Wronskian is a first integral of the equation, so
its drift is a direct measure of integration error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from ._parallel import pmap, worker_count
from .errors import ConfigError, NumericsError, SpanError
from .trap import TrapConfig

CouplingFn = Callable[[float], float]

WRONSKIAN_TOL = 1e-9
IC_WRONSKIAN_TOL = 1e-12
MARGINAL_TOL = 1e-9
# rtol ladder tried in turn when the Wronskian drifts out of tolerance
_RTOL_LADDER = (1e-12, 1e-13, 3e-14)


def wronskian(xi, xi_dot):
    return xi * np.conj(xi_dot) - xi_dot * np.conj(xi)


@dataclass(frozen=True, eq=False)
class ModeSolution:
    """Sampled mode function with cubic-Hermite dense output (see :func:`mode_at`)."""

    axis: str
    t: np.ndarray
    xi: np.ndarray
    xi_dot: np.ndarray
    xi_ddot: np.ndarray
    phi: np.ndarray
    phi_dot: np.ndarray
    theta: np.ndarray
    wronskian_drift: float

    @property
    def span(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    @property
    def phi_floor(self) -> float:
        return float(self.phi.min())

    def at(self, t):
        return mode_at(self, t)

    def wronskian(self) -> np.ndarray:
        return wronskian(self.xi, self.xi_dot)


def _unwrap_phase(t: np.ndarray, xi: np.ndarray, xi_dot: np.ndarray) -> np.ndarray:
    """Continuous arg xi.  Each step takes the 2 pi branch nearest the increment
    predicted from theta_dot = Im(xi_dot conj xi) / |xi|^2, so aliased phase
    jumps are caught rather than silently wrapped."""
    theta0 = float(np.angle(xi[0]))
    if xi.size == 1:
        return np.array([theta0])
    rate = (xi_dot * np.conj(xi)).imag / (xi * np.conj(xi)).real
    pred = 0.5 * np.diff(t) * (rate[1:] + rate[:-1])
    if np.max(np.abs(pred)) >= math.pi / 2:
        raise NumericsError(
            "mode sampling too coarse: phase advances by more than pi/2 between samples"
        )
    wrapped = np.angle(xi[1:] * np.conj(xi[:-1]))
    steps = wrapped + 2 * math.pi * np.round((pred - wrapped) / (2 * math.pi))
    return theta0 + np.concatenate(([0.0], np.cumsum(steps)))


def _build(axis, t, xi, xi_dot, xi_ddot, theta=None) -> ModeSolution:
    phi = 2.0 * (xi * np.conj(xi)).real
    phi_dot = 4.0 * (xi_dot * np.conj(xi)).real
    if theta is None:
        theta = _unwrap_phase(t, xi, xi_dot)
    drift = float(np.max(np.abs(wronskian(xi, xi_dot) + 1j)))
    for arr in (t, xi, xi_dot, xi_ddot, phi, phi_dot, theta):
        arr.setflags(write=False)
    return ModeSolution(axis, t, xi, xi_dot, xi_ddot, phi, phi_dot, theta, drift)


def sho_mode(omega_ref: float, times: Sequence[float], axis: str = "radial") -> ModeSolution:
    """Closed-form mode (2 omega)^(-1/2) exp(i omega t) of a static oscillator.

    The phase branch is theta = omega t exactly, so phase factors reduce to the
    usual exp(-i (n + 1/2) omega t).
    """
    if not omega_ref > 0:
        raise ConfigError("omega_ref must be positive")
    t = np.array(times, dtype=float, ndmin=1)
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ConfigError("sample times must be strictly increasing")
    xi = (2.0 * omega_ref) ** -0.5 * np.exp(1j * omega_ref * t)
    xi_dot = 1j * omega_ref * xi
    xi_ddot = -(omega_ref**2) * xi
    return _build(axis, t, xi, xi_dot, xi_ddot, theta=omega_ref * t)


def _eval_coupling(coupling_fn: CouplingFn, t: np.ndarray) -> np.ndarray:
    try:
        g = np.asarray(coupling_fn(t), dtype=float)
        if g.shape == t.shape:
            return g
    except (TypeError, ValueError):
        pass
    return np.array([float(coupling_fn(float(s))) for s in t])


def default_ic(coupling_fn: CouplingFn, t_start: float = 0.0) -> tuple[complex, complex]:
    """Local-oscillator initial data: xi0 = (2w)^(-1/2), xi_dot0 = i w xi0.

    w = sqrt(2 g(t_start)) when that is positive, otherwise 1.
    """
    g0 = float(coupling_fn(t_start))
    w = math.sqrt(2.0 * g0) if g0 > 0 else 1.0
    xi0 = complex((2.0 * w) ** -0.5)
    return xi0, 1j * w * xi0


def _solve(rhs, t0, t1, y0, t_eval, rtol, atol):
    with np.errstate(over="ignore", invalid="ignore"):
        sol = solve_ivp(rhs, (t0, t1), y0, method="DOP853", t_eval=t_eval, rtol=rtol, atol=atol)
    if not sol.success:
        raise NumericsError(f"mode integration failed: {sol.message}")
    return sol.y


def integrate_mode(
    coupling_fn: CouplingFn,
    ic: tuple[complex, complex] | None = None,
    tspan: tuple[float, float] = (0.0, 1.0),
    rtol: float = 1e-12,
    atol: float = 1e-14,
    dt_sample: float = 0.01,
    samples: int | None = None,
    wronskian_tol: float = WRONSKIAN_TOL,
    axis: str = "radial",
    enforce_wronskian: bool = True,
    t_ic: float | None = None,
) -> ModeSolution:
    """Integrate xi'' + 2 g(t) xi = 0 over ``tspan`` with an adaptive 8(5,3) Runge-Kutta pair.

    Initial data apply at ``t_ic`` (default: start of the span); the solution is
    carried forward and, if needed, backward from there.  The state is four
    reals.  If the Wronskian drift exceeds ``wronskian_tol`` the integration is
    repeated with tighter tolerances, and :class:`NumericsError` is raised when
    that does not help.  ``enforce_wronskian=False`` skips both the initial-data
    check and the drift guard (for scaled, non-normalized initial data).
    """
    t0, t1 = map(float, tspan)
    if not t1 > t0:
        raise ConfigError("tspan must satisfy t_end > t_start")
    t_ic = t0 if t_ic is None else float(t_ic)
    if not t0 <= t_ic <= t1:
        raise ConfigError("t_ic must lie inside tspan")
    if ic is None:
        ic = default_ic(coupling_fn, t_ic)
    xi0, xid0 = complex(ic[0]), complex(ic[1])
    if enforce_wronskian and abs(wronskian(xi0, xid0) + 1j) > IC_WRONSKIAN_TOL:
        raise ConfigError(
            f"initial data have Wronskian {wronskian(xi0, xid0):.3g}, expected -1j"
        )
    if samples is not None:
        dt_sample = (t1 - t0) / max(int(samples) - 1, 1)
    n_fwd = int(math.ceil((t1 - t_ic) / dt_sample - 1e-9))
    n_bwd = int(math.ceil((t_ic - t0) / dt_sample - 1e-9))
    t_fwd = np.linspace(t_ic, t1, n_fwd + 1)
    t_bwd = np.linspace(t_ic, t0, n_bwd + 1)

    def rhs(t, y):
        c = 2.0 * coupling_fn(t)
        return (y[2], y[3], -c * y[0], -c * y[1])

    y0 = [xi0.real, xi0.imag, xid0.real, xid0.imag]
    ladder = [r for r in _RTOL_LADDER if r < rtol]
    ladder.insert(0, rtol)
    last_drift = math.inf
    for tol in ladder:
        parts = []
        if n_bwd:
            parts.append(_solve(rhs, t_ic, t0, y0, t_bwd, tol, atol)[:, :0:-1])
        if n_fwd:
            parts.append(_solve(rhs, t_ic, t1, y0, t_fwd, tol, atol))
        else:
            parts.append(np.array(y0)[:, None])
        y = np.concatenate(parts, axis=1)
        xi = y[0] + 1j * y[1]
        xi_dot = y[2] + 1j * y[3]
        if not (np.all(np.isfinite(xi)) and np.all(np.isfinite(xi_dot))):
            last_drift = math.inf
            continue
        w = wronskian(xi, xi_dot)
        last_drift = float(np.max(np.abs(w + 1j)))
        if not enforce_wronskian or last_drift <= wronskian_tol:
            break
    else:
        raise NumericsError(
            f"Wronskian drift {last_drift:.3g} exceeds {wronskian_tol:.1g} on [{t0}, {t1}]"
        )
    t = np.concatenate((t_bwd[:0:-1], t_fwd))
    theta = _unwrap_phase(t, xi, xi_dot)
    # anchor the branch at the initial-data time
    i_ic = n_bwd
    theta = theta - 2 * math.pi * round((theta[i_ic] - math.atan2(xi0.imag, xi0.real)) / (2 * math.pi))
    xi_ddot = -2.0 * _eval_coupling(coupling_fn, t) * xi
    return _build(axis, t, xi, xi_dot, xi_ddot, theta=theta)


def floquet_ic(coupling_fn: CouplingFn, period: float, t_start: float = 0.0) -> tuple[complex, complex]:
    """Initial data of the Floquet solution, xi(t + T) = lambda xi(t), with W = -i.

    For this choice phi(t) is exactly periodic.  Only defined for stable couplings.
    """
    m = _monodromy(coupling_fn, period, t_start)
    res = _classify(m[0, 0] + m[1, 1], float(np.linalg.det(m)))
    if not res.stable:
        raise NumericsError("Floquet initial data need a stable coupling")
    vals, vecs = np.linalg.eig(m)
    xi0, xid0 = vecs[0, 0], vecs[1, 0]
    im = (xid0 * np.conj(xi0)).imag
    if im < 0:
        xi0, xid0, im = np.conj(xi0), np.conj(xid0), -im
    scale = (2.0 * im) ** -0.5
    # global phase: make xi0 real positive
    ph = abs(xi0) / xi0
    return complex(xi0 * scale * ph), complex(xid0 * scale * ph)


def _hermite_basis(s):
    s2 = s * s
    s3 = s2 * s
    return 2 * s3 - 3 * s2 + 1, s3 - 2 * s2 + s, -2 * s3 + 3 * s2, s3 - s2


def mode_at(mode: ModeSolution, t):
    """Interpolate ``(xi, xi_dot, phi, phi_dot, theta)`` at ``t``.

    xi uses xi_dot as knot slopes and xi_dot uses xi_ddot, both cubic Hermite;
    phi, phi_dot and theta are recomputed from the interpolants.  Scalar in,
    scalars out; arrays broadcast.
    """
    ts = mode.t
    tq = np.asarray(t, dtype=float)
    lo, hi = ts[0], ts[-1]
    slack = 1e-12 * max(1.0, abs(lo), abs(hi))
    if np.any(tq < lo - slack) or np.any(tq > hi + slack):
        raise SpanError(f"t={t} outside mode span [{lo}, {hi}]")
    if ts.size == 1:
        i = np.zeros(tq.shape, dtype=int)
        xi = np.broadcast_to(mode.xi[0], tq.shape)
        xid = np.broadcast_to(mode.xi_dot[0], tq.shape)
    else:
        i = np.clip(np.searchsorted(ts, tq, side="right") - 1, 0, ts.size - 2)
        h = ts[i + 1] - ts[i]
        s = np.clip((tq - ts[i]) / h, 0.0, 1.0)
        h00, h10, h01, h11 = _hermite_basis(s)
        xi = h00 * mode.xi[i] + h10 * h * mode.xi_dot[i] + h01 * mode.xi[i + 1] + h11 * h * mode.xi_dot[i + 1]
        xid = (h00 * mode.xi_dot[i] + h10 * h * mode.xi_ddot[i]
               + h01 * mode.xi_dot[i + 1] + h11 * h * mode.xi_ddot[i + 1])
    phi = 2.0 * (xi * np.conj(xi)).real
    phi_dot = 4.0 * (xid * np.conj(xi)).real
    theta = mode.theta[i] + np.angle(xi * np.conj(mode.xi[i]))
    if tq.ndim == 0:
        return complex(xi), complex(xid), float(phi), float(phi_dot), float(theta)
    return xi, xid, phi, phi_dot, theta


class FloquetResult(NamedTuple):
    multipliers: tuple[complex, complex]
    stable: bool
    trace: float
    marginal: bool
    determinant: float


def _classify(trace: float, det: float) -> FloquetResult:
    disc = complex(trace * trace - 4.0) ** 0.5
    mult = (complex((trace + disc) / 2.0), complex((trace - disc) / 2.0))
    a = abs(trace)
    marginal = bool(abs(a - 2.0) <= MARGINAL_TOL)
    stable = bool(a < 2.0 and not marginal)
    return FloquetResult(mult, stable, float(trace), marginal, float(det))


def _monodromy(coupling_fn, period, t_start=0.0, rtol=1e-12, atol=1e-14) -> np.ndarray:
    def rhs(t, y):
        c = 2.0 * coupling_fn(t)
        return (y[1], -c * y[0], y[3], -c * y[2])

    y = _solve(rhs, t_start, t_start + period, [1.0, 0.0, 0.0, 1.0], None, rtol, atol)[:, -1]
    return np.array([[y[0], y[2]], [y[1], y[3]]])


def floquet_stability(coupling_fn: CouplingFn, period: float, t_start: float = 0.0,
                      rtol: float = 1e-12, atol: float = 1e-14) -> FloquetResult:
    """Monodromy over one period from the two real fundamental solutions.

    Stable iff |trace| < 2.  |trace| = 2 (to 1e-9) is reported unstable with
    ``marginal=True``.
    """
    if not period > 0:
        raise ConfigError("period must be positive")
    m = _monodromy(coupling_fn, period, t_start, rtol, atol)
    return _classify(m[0, 0] + m[1, 1], float(np.linalg.det(m)))


def mathieu_coupling(a: float, q: float) -> CouplingFn:
    """g(tau) for the standard Mathieu equation x'' + (a - 2q cos 2 tau) x = 0 (period pi)."""
    return lambda t: 0.5 * (a - 2.0 * q * np.cos(2.0 * t))


def stability_boundary(a: float, q_lo: float, q_hi: float, xtol: float = 1e-5) -> float:
    """Bisect in q for the change of Mathieu stability along a fixed ``a``."""
    def stable(q):
        return floquet_stability(mathieu_coupling(a, q), math.pi).stable

    s_lo = stable(q_lo)
    if stable(q_hi) == s_lo:
        raise ConfigError(f"no stability change between q={q_lo} and q={q_hi}")
    while q_hi - q_lo > xtol:
        mid = 0.5 * (q_lo + q_hi)
        if stable(mid) == s_lo:
            q_lo = mid
        else:
            q_hi = mid
    return 0.5 * (q_lo + q_hi)


@dataclass(frozen=True, eq=False)
class StabilityChart:
    """Stability flags over a 2-D sweep; arrays are indexed ``[i1, i2]``."""

    p1_name: str
    p2_name: str
    p1: np.ndarray
    p2: np.ndarray
    trace_r: np.ndarray
    trace_z: np.ndarray
    stable_r: np.ndarray
    stable_z: np.ndarray

    @property
    def stable_trap(self) -> np.ndarray:
        return self.stable_r & self.stable_z

    def rows(self):
        """Cells in row order (p1 outer, p2 inner)."""
        for i, a in enumerate(self.p1):
            for j, b in enumerate(self.p2):
                yield (a, b, self.trace_r[i, j], self.trace_z[i, j],
                       bool(self.stable_r[i, j]), bool(self.stable_z[i, j]),
                       bool(self.stable_r[i, j] and self.stable_z[i, j]))


SWEEP_PARAMS = ("a_r", "q_r", "vdc", "vac")


def _cell_config(template: TrapConfig, names, v1, v2) -> dict:
    vals = dict(zip(names, (v1, v2)))
    scale = template.r0**2 * template.omega**2 / template.e
    vdc, vac = template.vdc, template.vac
    if "a_r" in vals:
        vdc = vals["a_r"] * scale / 4.0
    if "q_r" in vals:
        vac = vals["q_r"] * scale / 2.0
    vdc = vals.get("vdc", vdc)
    vac = vals.get("vac", vac)
    return dict(vdc=vdc, vac=vac)


def _rk4_steps(alpha, beta, omega) -> int:
    period = 2.0 * math.pi / omega
    wmax = math.sqrt(max(float(np.max(np.abs(alpha) + np.abs(beta), initial=0.0)), omega**2))
    return max(1024, int(math.ceil(period * wmax / 0.005)))


def _batched_monodromy_trace(alpha: np.ndarray, beta: np.ndarray, omega: float,
                             n: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Trace and determinant of the one-period monodromy for many systems at once.

    Each system is y'' + (alpha + beta cos(omega s)) y = 0; classical RK4 with
    ``n`` fixed steps, by default fine enough for the stiffest member.
    """
    period = 2.0 * math.pi / omega
    n = _rk4_steps(alpha, beta, omega) if n is None else int(n)
    h = period / n
    k = alpha.size
    y = np.zeros((4, k))
    y[0] = 1.0
    y[3] = 1.0

    def f(s, y):
        c = alpha + beta * math.cos(omega * s)
        return np.stack((y[1], -c * y[0], y[3], -c * y[2]))

    s = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n):
            k1 = f(s, y)
            k2 = f(s + h / 2, y + h / 2 * k1)
            k3 = f(s + h / 2, y + h / 2 * k2)
            k4 = f(s + h, y + h * k3)
            y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            s += h
    trace = y[0] + y[3]
    det = y[0] * y[3] - y[2] * y[1]
    return trace, det


def stability_scan(template: TrapConfig, sweep1, sweep2, params=("a_r", "q_r")) -> StabilityChart:
    """Radial and axial Floquet stability over a grid of two drive parameters.

    ``sweep1``/``sweep2`` are ``(min, max, count)``; ``params`` names the swept
    quantities among ``a_r``, ``q_r``, ``vdc``, ``vac``.  All other parameters
    come from ``template``.
    """
    names = tuple(params)
    if len(names) != 2 or names[0] == names[1] or any(p not in SWEEP_PARAMS for p in names):
        raise ConfigError(f"sweep parameters must be two distinct names from {SWEEP_PARAMS}")
    axes = []
    for lo, hi, count in (sweep1, sweep2):
        if int(count) != count or count < 2:
            raise ConfigError("sweep counts must be integers >= 2")
        if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
            raise ConfigError(f"invalid sweep range {lo}:{hi}")
        axes.append(np.linspace(lo, hi, int(count)))
    p1, p2 = axes
    cells = [_cell_config(template, names, a, b) for a in p1 for b in p2]
    vdc = np.array([c["vdc"] for c in cells])
    vac = np.array([c["vac"] for c in cells])
    if np.any(vac < 0):
        raise ConfigError("sweep produces negative ac amplitude")
    # 2 g = (e / r0^2) V(t); 2 g3 = -2 (2 g)
    k = template.e / template.r0**2
    alpha = np.concatenate((k * vdc, -2.0 * k * vdc))
    beta = np.concatenate((-k * vac, 2.0 * k * vac))

    # one step count for the whole sweep so results do not depend on chunking
    steps = _rk4_steps(alpha, beta, template.omega)
    chunks = np.array_split(np.arange(alpha.size), min(worker_count(), alpha.size))
    parts = pmap(lambda idx: _batched_monodromy_trace(alpha[idx], beta[idx], template.omega, steps),
                 chunks)
    trace = np.concatenate([p[0] for p in parts])
    ncell = len(cells)
    shape = (p1.size, p2.size)
    trace_r = trace[:ncell].reshape(shape)
    trace_z = trace[ncell:].reshape(shape)

    def is_stable(tr):
        a = np.abs(tr)
        return np.isfinite(a) & (a < 2.0 - MARGINAL_TOL)

    return StabilityChart(names[0], names[1], p1, p2, trace_r, trace_z,
                          is_stable(trace_r), is_stable(trace_z))
