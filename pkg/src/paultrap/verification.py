"""Finite-difference checks of the Schrodinger equation and the symmetry algebra.

A *sampler* is a callable ``f(*coords, t)`` that accepts coordinate arrays and
a scalar time.  Differential operators here map samplers to samplers by
probing the input at shifted coordinates (4th-order central stencils), so
they compose: ``j_minus(mode, j_plus(mode, f))`` is again a sampler.

Checks never assert; they return :class:`ResidualReport` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .cartesian import CartesianQN, xy_state, z_state
from .cylindrical import PolarQN, omega_state
from .errors import ConfigError, CoverageError
from .modes import ModeSolution, mode_at

Sampler = Callable[..., np.ndarray]

MIN_POINTS = 9
DT_PROBE = 1e-5
AXIS_GUARD = 4.0


@dataclass(frozen=True)
class GridSpec:
    """Tensor grid of evaluation points plus the time slices to check.

    ``axes`` holds ``(min, max, count)`` per axis.  A periodic axis samples
    ``[min, max)``; others include both ends.  ``stencil`` overrides the
    finite-difference spacing per axis (default: the grid spacing), which lets
    a coarse set of points be checked with a fine stencil.
    """

    axes: tuple
    times: tuple = (0.0,)
    dt_probe: float = DT_PROBE
    stencil: tuple | None = None
    periodic: tuple | None = None

    def __post_init__(self):
        axes = tuple((float(a), float(b), int(n)) for a, b, n in self.axes)
        if not axes:
            raise ConfigError("grid needs at least one axis")
        for lo, hi, n in axes:
            if n < MIN_POINTS:
                raise ConfigError(f"grid axes need at least {MIN_POINTS} points, got {n}")
            if not hi > lo:
                raise ConfigError(f"degenerate grid axis {lo}:{hi}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "times", tuple(float(t) for t in np.atleast_1d(self.times)))
        periodic = self.periodic or (False,) * len(axes)
        if len(periodic) != len(axes):
            raise ConfigError("periodic flags must match axes")
        object.__setattr__(self, "periodic", tuple(bool(p) for p in periodic))
        if self.stencil is not None:
            if len(self.stencil) != len(axes) or any(s <= 0 for s in self.stencil):
                raise ConfigError("stencil spacings must be positive, one per axis")
            object.__setattr__(self, "stencil", tuple(float(s) for s in self.stencil))
        if not self.dt_probe > 0:
            raise ConfigError("dt_probe must be positive")

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def spacing(self) -> tuple:
        return tuple((hi - lo) / (n if per else n - 1)
                     for (lo, hi, n), per in zip(self.axes, self.periodic))

    @property
    def h(self) -> tuple:
        return self.stencil if self.stencil is not None else self.spacing

    def coords(self) -> list[np.ndarray]:
        out = []
        for (lo, hi, n), per in zip(self.axes, self.periodic):
            out.append(lo + (hi - lo) * np.arange(n) / n if per else np.linspace(lo, hi, n))
        return out

    def mesh(self) -> list[np.ndarray]:
        return np.meshgrid(*self.coords(), indexing="ij")

    def interior(self) -> np.ndarray:
        """Points whose +-2h stencil stays inside the box (periodic axes always qualify)."""
        mesh = self.mesh()
        mask = np.ones(mesh[0].shape, dtype=bool)
        for c, (lo, hi, _), h, per in zip(mesh, self.axes, self.h, self.periodic):
            if not per:
                eps = 1e-9 * h
                mask &= (c - 2 * h >= lo - eps) & (c + 2 * h <= hi + eps)
        return mask

    def summary(self) -> dict:
        return {"axes": [list(a) for a in self.axes], "h": list(self.h),
                "times": list(self.times), "dt_probe": self.dt_probe}


@dataclass
class ResidualReport:
    check: str
    max_abs: float
    rms: float
    l2: float
    n_points: int
    tol: float
    metric: str = "max_abs"
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    # "below": pass iff value <= tol; "above": a negative control, pass iff value >= tol
    expect: str = "below"

    @property
    def value(self) -> float:
        return self.l2 if self.metric == "l2" else self.max_abs

    @property
    def passed(self) -> bool:
        v = self.value
        if self.expect == "above":
            return bool(np.isnan(v) or v >= self.tol)
        return bool(np.isfinite(v) and v <= self.tol)

    def as_control(self, threshold: float) -> "ResidualReport":
        """Same measurement, judged as a non-solution that must exceed ``threshold``."""
        return replace(self, check=f"control_{self.check}", tol=float(threshold), expect="above")

    def to_dict(self) -> dict:
        return {"check": self.check, "params": self.params, "max_abs": self.max_abs,
                "rms": self.rms, "l2": self.l2, "metric": self.metric,
                "tol": self.tol, "expect": self.expect, "pass": self.passed}


def merge_reports(reports: Sequence[ResidualReport]) -> ResidualReport:
    """Combine per-slice reports of one check: worst norms, pooled rms."""
    first = reports[0]
    n = sum(r.n_points for r in reports)
    rms = math.sqrt(sum(r.rms**2 * r.n_points for r in reports) / n)
    grid = {"slices": [r.grid for r in reports]}
    return replace(first, max_abs=max(r.max_abs for r in reports), rms=rms,
                   l2=max(r.l2 for r in reports), n_points=n, grid=grid)


def _make_report(check, values, weights, tol, grid, params, metric="max_abs"):
    a = np.abs(np.concatenate([np.ravel(v) for v in values]))
    if a.size == 0:
        raise ConfigError(f"{check}: grid has no interior points")
    with np.errstate(over="ignore", invalid="ignore"):
        max_abs = float(np.max(a))
        rms = float(np.sqrt(np.mean(a * a)))
        # grid L2 norm per time slice, worst slice reported
        n_slices = len(values)
        l2 = max(float(np.sqrt(np.sum(np.abs(np.ravel(v)) ** 2 * np.ravel(x))))
                 for v, x in zip(values, weights)) if n_slices else 0.0
    if not np.isfinite(max_abs):
        max_abs = rms = l2 = math.inf
    return ResidualReport(check, max_abs, rms, l2, int(a.size), float(tol), metric,
                          dict(params), grid.summary())


# --- sampler operators ------------------------------------------------------

def _shift(args, axis, offset):
    args = list(args)
    args[axis] = args[axis] + offset
    return args


def d1(f: Sampler, axis: int, h: float) -> Sampler:
    def g(*args):
        return (f(*_shift(args, axis, -2 * h)) - 8 * f(*_shift(args, axis, -h))
                + 8 * f(*_shift(args, axis, h)) - f(*_shift(args, axis, 2 * h))) / (12 * h)
    return g


def d2(f: Sampler, axis: int, h: float) -> Sampler:
    def g(*args):
        return (-f(*_shift(args, axis, -2 * h)) + 16 * f(*_shift(args, axis, -h)) - 30 * f(*args)
                + 16 * f(*_shift(args, axis, h)) - f(*_shift(args, axis, 2 * h))) / (12 * h * h)
    return g


def d_t(f: Sampler, dt: float = DT_PROBE) -> Sampler:
    """Central time derivative with one Richardson step."""
    def g(*args):
        *xs, t = args

        def central(s):
            return (f(*xs, t + s) - f(*xs, t - s)) / (2 * s)

        return (4 * central(dt / 2) - central(dt)) / 3
    return g


def j_minus(mode: ModeSolution, f: Sampler, axis: int = 0, h: float = 0.01) -> Sampler:
    """J_- = xi d/dq - i xi_dot q along coordinate ``axis``."""
    df = d1(f, axis, h)

    def g(*args):
        xi, xid, *_ = mode_at(mode, args[-1])
        return xi * df(*args) - 1j * xid * args[axis] * f(*args)
    return g


def j_plus(mode: ModeSolution, f: Sampler, axis: int = 0, h: float = 0.01) -> Sampler:
    """J_+ = -conj(xi) d/dq + i conj(xi_dot) q along coordinate ``axis``."""
    df = d1(f, axis, h)

    def g(*args):
        xi, xid, *_ = mode_at(mode, args[-1])
        return -np.conj(xi) * df(*args) + 1j * np.conj(xid) * args[axis] * f(*args)
    return g


def _combine(f1, f2, c1, c2):
    return lambda *args: c1 * f1(*args) + c2 * f2(*args)


_R2 = 1 / math.sqrt(2.0)


# (x, y) samplers; a_-/c_- and raising partners from J_x, J_y
def a_minus(mode, f, h=0.01):
    return _combine(j_minus(mode, f, 0, h), j_minus(mode, f, 1, h), _R2, 1j * _R2)


def c_minus(mode, f, h=0.01):
    return _combine(j_minus(mode, f, 0, h), j_minus(mode, f, 1, h), _R2, -1j * _R2)


def a_plus(mode, f, h=0.01):
    return _combine(j_plus(mode, f, 0, h), j_plus(mode, f, 1, h), _R2, -1j * _R2)


def c_plus(mode, f, h=0.01):
    return _combine(j_plus(mode, f, 0, h), j_plus(mode, f, 1, h), _R2, 1j * _R2)


def l_z(f, h=0.01):
    """L_z = i (y d/dx - x d/dy) on an (x, y) sampler."""
    dx, dy = d1(f, 0, h), d1(f, 1, h)
    return lambda x, y, t: 1j * (y * dx(x, y, t) - x * dy(x, y, t))


def k_op(mode, f, h=0.01):
    """K = a_+ a_- + c_+ c_- + 1."""
    aa = a_plus(mode, a_minus(mode, f, h), h)
    cc = c_plus(mode, c_minus(mode, f, h), h)
    return lambda *args: aa(*args) + cc(*args) + f(*args)


def f_op(mode, f, h=0.01):
    k, lz = k_op(mode, f, h), l_z(f, h)
    return lambda *args: 0.5 * (k(*args) - lz(*args))


def d_op(mode, f, h=0.01):
    k, lz = k_op(mode, f, h), l_z(f, h)
    return lambda *args: 0.5 * (k(*args) + lz(*args))


# --- samplers for the exact states and controls ------------------------------

def z_sampler(mode: ModeSolution, n: int) -> Sampler:
    return lambda z, t: z_state(mode, n, z, t)


def psi_sampler(modes, qn: CartesianQN) -> Sampler:
    radial, axial = modes
    return lambda x, y, z, t: (xy_state(radial, qn.n_x, x, t) * xy_state(radial, qn.n_y, y, t)
                               * z_state(axial, qn.n_z, z, t))


def omega_sampler(mode: ModeSolution, qn: PolarQN) -> Sampler:
    return lambda r, theta, t: omega_state(mode, qn, r, theta, t)


def omega_xy_sampler(mode: ModeSolution, qn: PolarQN) -> Sampler:
    return lambda x, y, t: omega_state(mode, qn, np.hypot(x, y), np.arctan2(y, x), t)


def wrong_width_sampler(mode: ModeSolution) -> Sampler:
    """Extremal Gaussian with phi replaced by 2 phi: normalized, but not a solution."""
    def f(z, t):
        _, _, phi, phi_dot, theta = mode_at(mode, t)
        s2 = np.asarray(z, dtype=float) ** 2 / (2 * phi)
        return (2 * math.pi * phi) ** -0.25 * np.exp(-0.5j * theta - 0.5 * s2 * (1 - 0.5j * phi_dot))
    return f


def wrong_angle_sampler(mode: ModeSolution, qn: PolarQN) -> Sampler:
    """Omega_{n,m} with its angular factor advanced by one unit of l_z."""
    return lambda r, theta, t: omega_state(mode, qn, r, theta, t) * np.exp(1j * np.asarray(theta))


# --- checks -------------------------------------------------------------------

def _interior_points(grid: GridSpec, extra_mask=None):
    mask = grid.interior()
    if extra_mask is not None:
        mask &= extra_mask
    pts = [c[mask] for c in grid.mesh()]
    if pts[0].size == 0:
        raise ConfigError("grid has no stencil-valid interior points")
    return pts


def _cell_volume(grid: GridSpec) -> float:
    return float(np.prod(grid.spacing))


def _run(check, op: Sampler, grid: GridSpec, tol, params, extra_mask=None,
         measure=None, metric="max_abs", target: Sampler | None = None):
    pts = _interior_points(grid, extra_mask)
    vol = _cell_volume(grid)
    w = np.full(pts[0].shape, vol) if measure is None else vol * measure(*pts)
    values, weights = [], []
    for t in grid.times:
        v = op(*pts, t)
        if target is not None:
            v = v - target(*pts, t)
        values.append(v)
        weights.append(w)
    return _make_report(check, values, weights, tol, grid, params, metric)


def schrodinger_residual_1d(sampler: Sampler, coupling_fn, grid: GridSpec, tol: float,
                            name: str = "schrodinger_1d", params=None) -> ResidualReport:
    """Residual of f_zz + 2i f_t - 2 g(t) z^2 f on the interior of a 1-D grid."""
    if grid.ndim != 1:
        raise ConfigError("1-D residual needs a 1-D grid")
    (h,) = grid.h
    fzz, ft = d2(sampler, 0, h), d_t(sampler, grid.dt_probe)

    def op(z, t):
        return fzz(z, t) + 2j * ft(z, t) - 2 * float(coupling_fn(t)) * z * z * sampler(z, t)

    return _run(name, op, grid, tol, params or {})


def schrodinger_residual_3d_cartesian(sampler: Sampler, couplings, grid: GridSpec, tol: float,
                                      name: str = "schrodinger_3d", params=None) -> ResidualReport:
    if grid.ndim != 3:
        raise ConfigError("3-D residual needs a 3-D grid")
    g_fn, g3_fn = couplings
    hx, hy, hz = grid.h
    fxx, fyy, fzz = d2(sampler, 0, hx), d2(sampler, 1, hy), d2(sampler, 2, hz)
    ft = d_t(sampler, grid.dt_probe)

    def op(x, y, z, t):
        g, g3 = float(g_fn(t)), float(g3_fn(t))
        pot = 2 * g * (x * x + y * y) + 2 * g3 * z * z
        return fxx(x, y, z, t) + fyy(x, y, z, t) + fzz(x, y, z, t) + 2j * ft(x, y, z, t) \
            - pot * sampler(x, y, z, t)

    return _run(name, op, grid, tol, params or {})


def schrodinger_residual_polar(sampler: Sampler, coupling_fn, grid: GridSpec, tol: float,
                               name: str = "schrodinger_polar", params=None) -> ResidualReport:
    """Residual of f_rr + f_r / r + f_thth / r^2 + 2i f_t - 2 g r^2 f.

    Axes are (r, theta); theta is treated as periodic.  Points with r < 4h are
    skipped; a grid whose stencil would reach r <= 0 is rejected.
    """
    if grid.ndim != 2:
        raise ConfigError("polar residual needs an (r, theta) grid")
    if not grid.periodic[1]:
        grid = GridSpec(grid.axes, grid.times, grid.dt_probe, grid.stencil, (False, True))
    hr, hth = grid.h
    r_min = grid.axes[0][0]
    if r_min - 2 * hr <= 0:
        raise ConfigError(f"polar grid touches the axis: r_min={r_min} needs > {2 * hr}")
    fr, frr = d1(sampler, 0, hr), d2(sampler, 0, hr)
    fthth, ft = d2(sampler, 1, hth), d_t(sampler, grid.dt_probe)

    def op(r, th, t):
        g = float(coupling_fn(t))
        return (frr(r, th, t) + fr(r, th, t) / r + fthth(r, th, t) / (r * r)
                + 2j * ft(r, th, t) - 2 * g * r * r * sampler(r, th, t))

    guard = grid.mesh()[0] >= AXIS_GUARD * hr
    return _run(name, op, grid, tol, params or {}, extra_mask=guard,
                measure=lambda r, th: r)


def ladder_check_z(mode: ModeSolution, n: int, grid: GridSpec, tol: float) -> list[ResidualReport]:
    """J_- Z_n = sqrt(n) Z_{n-1} and J_+ Z_n = sqrt(n+1) Z_{n+1} in grid L2 norm."""
    if n < 0:
        raise ConfigError("n must be non-negative")
    (h,) = grid.h
    zn = z_sampler(mode, n)
    reports = []
    lower = (lambda z, t: math.sqrt(n) * z_state(mode, n - 1, z, t)) if n else (lambda z, t: 0.0 * z)
    reports.append(_run("ladder_z_minus", j_minus(mode, zn, 0, h), grid, tol, {"n": n},
                        metric="l2", target=lower))
    reports.append(_run("ladder_z_plus", j_plus(mode, zn, 0, h), grid, tol, {"n": n},
                        metric="l2", target=lambda z, t: math.sqrt(n + 1) * z_state(mode, n + 1, z, t)))
    return reports


def commutator_check(mode: ModeSolution, test_functions: dict, grid: GridSpec,
                     tol: float) -> list[ResidualReport]:
    """([J_-, J_+] - 1) f for each named 1-D test sampler."""
    (h,) = grid.h
    reports = []
    for name, f in test_functions.items():
        mp = j_minus(mode, j_plus(mode, f, 0, h), 0, h)
        pm = j_plus(mode, j_minus(mode, f, 0, h), 0, h)
        op = (lambda mp, pm, f: lambda z, t: mp(z, t) - pm(z, t) - f(z, t))(mp, pm, f)
        reports.append(_run("commutator_z", op, grid, tol, {"f": name}, metric="l2"))
    return reports


def default_test_functions(mode: ModeSolution) -> dict:
    return {
        "gaussian": lambda z, t: np.exp(-0.5 * np.asarray(z) ** 2) + 0j,
        "Z1": z_sampler(mode, 1),
        "hermite_gaussian": lambda z, t: (4 * z**2 - 2 + 1.5j * z) * np.exp(-0.3 * z**2 + 0.2j * z),
    }


def polar_ladder_check(mode: ModeSolution, qn: PolarQN, grid: GridSpec, tol: float,
                       sampler: Sampler | None = None) -> list[ResidualReport]:
    """a_-, c_-, a_+, c_+ actions on Omega_{n,m}, sampled on an (x, y) grid."""
    if grid.ndim != 2:
        raise ConfigError("polar ladder check needs an (x, y) grid")
    n, m = qn.n, qn.m
    h = min(grid.h)
    f = sampler or omega_xy_sampler(mode, qn)
    params = {"n": n, "m": m}

    def target(c, dn, dm):
        if n + dn < 0 or m + dm < 0:
            return lambda x, y, t: 0.0 * x
        g = omega_xy_sampler(mode, PolarQN(n + dn, m + dm))
        return lambda x, y, t: c * g(x, y, t)

    cases = [
        ("a_minus", a_minus, math.sqrt(n), -1, 0),
        ("c_minus", c_minus, math.sqrt(m), 0, -1),
        ("a_plus", a_plus, math.sqrt(n + 1), 1, 0),
        ("c_plus", c_plus, math.sqrt(m + 1), 0, 1),
    ]
    return [_run(f"polar_ladder_{name}", op(mode, f, h), grid, tol, params, metric="l2",
                 target=target(c, dn, dm)) for name, op, c, dn, dm in cases]


def eigen_check(mode: ModeSolution, qn: PolarQN, grid: GridSpec, tol: float,
                sampler: Sampler | None = None) -> list[ResidualReport]:
    """Eigen-relations of L_z, K, f, d and the two Casimirs on Omega_{n,m}.

    f = (K - L_z)/2 and d = (K + L_z)/2 are built from K and L_z.  The Casimir
    relations a_+a_- - f = -1/2, c_+c_- - d = -1/2 hold for any function, so
    they test the discrete operators rather than the state.
    """
    if grid.ndim != 2:
        raise ConfigError("eigen check needs an (x, y) grid")
    n, m = qn.n, qn.m
    h = min(grid.h)
    f = sampler or omega_xy_sampler(mode, qn)
    aa = a_plus(mode, a_minus(mode, f, h), h)
    cc = c_plus(mode, c_minus(mode, f, h), h)
    lz = l_z(f, h)
    k = lambda *a: aa(*a) + cc(*a) + f(*a)
    fo = lambda *a: 0.5 * (k(*a) - lz(*a))
    do = lambda *a: 0.5 * (k(*a) + lz(*a))
    cases = [
        ("eigen_Lz", lz, m - n),
        ("eigen_K", k, n + m + 1),
        ("eigen_f", fo, n + 0.5),
        ("eigen_d", do, m + 0.5),
        ("casimir_a", lambda *a: aa(*a) - fo(*a), -0.5),
        ("casimir_c", lambda *a: cc(*a) - do(*a), -0.5),
    ]
    params = {"n": n, "m": m}
    return [_run(name, (lambda op, lam: lambda *a: op(*a) - lam * f(*a))(op, lam), grid, tol,
                 dict(params, eigenvalue=lam)) for name, op, lam in cases]


def angular_eigen_check(sampler: Sampler, l_value: int, grid: GridSpec, tol: float) -> ResidualReport:
    """-i d/dtheta f = l f on an (r, theta) grid with a periodic stencil."""
    if not grid.periodic[1]:
        grid = GridSpec(grid.axes, grid.times, grid.dt_probe, grid.stencil, (False, True))
    dth = d1(sampler, 1, grid.h[1])
    op = lambda r, th, t: -1j * dth(r, th, t) - l_value * sampler(r, th, t)
    return _run("eigen_Lz_polar", op, grid, tol, {"l_z": l_value}, measure=lambda r, th: r)


def _boundary_mass(density, grid: GridSpec, measure: str):
    coords = grid.mesh()
    vol = _cell_volume(grid)
    edge = np.zeros(coords[0].shape, dtype=bool)
    for axis, ((lo, hi, _), per) in enumerate(zip(grid.axes, grid.periodic)):
        if per:
            continue
        band = 0.1 * (hi - lo)
        c = coords[axis]
        if measure == "cylindrical" and axis == 0:
            edge |= c >= hi - band
        else:
            edge |= (c <= lo + band) | (c >= hi - band)
    return float(np.sum(density[edge]) * vol)


def quadrature_weights(grid: GridSpec, measure: str = "cartesian") -> np.ndarray:
    """Tensor quadrature weights: composite Simpson on closed axes (trapezoid if
    the count is even), uniform on periodic axes; times r for ``cylindrical``.

    Simpson rather than trapezoid because r |f|^2 has a kink-like odd
    extension at r = 0 that costs the trapezoid rule O(h^2).
    """
    ws = []
    for (lo, hi, n), per, h in zip(grid.axes, grid.periodic, grid.spacing):
        if per:
            w = np.full(n, h)
        elif n % 2:
            w = np.full(n, 2.0)
            w[1::2] = 4.0
            w[0] = w[-1] = 1.0
            w *= h / 3
        else:
            w = np.full(n, h)
            w[0] = w[-1] = h / 2
        ws.append(w)
    weights = ws[0]
    for w in ws[1:]:
        weights = np.multiply.outer(weights, w)
    if measure == "cylindrical":
        weights = weights * grid.mesh()[0]
    return weights


def norm_conservation(sampler: Sampler, measure: str, grid, times: Sequence[float],
                      tol: float, name: str = "norm") -> ResidualReport:
    """Quadrature norm at each time: |norm - 1| <= tol and spread over times <= tol.

    ``measure`` is ``"cartesian"`` (dV) or ``"cylindrical"`` (first axis r,
    second theta; weight r).  ``grid`` is a :class:`GridSpec` or a callable
    ``t -> GridSpec`` for time-dependent boxes.  Raises
    :class:`CoverageError` if more than tol/10 of the probability sits in the
    outer tenth of the box.
    """
    if measure not in ("cartesian", "cylindrical"):
        raise ConfigError(f"unknown measure {measure!r}")
    grid_at = grid if callable(grid) else (lambda t: grid)
    norms, summaries = [], []
    for t in times:
        gr = grid_at(float(t))
        if measure == "cylindrical" and not gr.periodic[1]:
            gr = GridSpec(gr.axes, gr.times, gr.dt_probe, gr.stencil,
                          (False, True) + tuple(gr.periodic[2:]))
        mesh = gr.mesh()
        dens = np.abs(sampler(*mesh, float(t))) ** 2
        dens_measure = dens * mesh[0] if measure == "cylindrical" else dens
        edge = _boundary_mass(dens_measure, gr, measure)
        if edge > tol / 10:
            raise CoverageError(f"{name}: boundary mass {edge:.2e} at t={t} exceeds {tol / 10:.1e}")
        norms.append(float(np.sum(dens * quadrature_weights(gr, measure))))
        summaries.append(gr.summary())
    norms = np.array(norms)
    dev = np.abs(norms - 1.0)
    spread = float(norms.max() - norms.min())
    max_abs = max(float(dev.max()), spread)
    return ResidualReport(name, max_abs, float(np.sqrt(np.mean(dev**2))), max_abs, len(norms),
                          float(tol), "max_abs", {"measure": measure, "norms": norms.tolist(),
                                                  "times": [float(t) for t in times]},
                          summaries[0] if len(summaries) == 1 else {"slices": summaries})


def inner_product(f: Sampler, g: Sampler, grid: GridSpec, t: float) -> complex:
    """<f|g> on a 1-D grid by the trapezoid rule."""
    (z,) = grid.coords()
    w = quadrature_weights(grid)
    return complex(np.sum(np.conj(f(z, t)) * g(z, t) * w))
