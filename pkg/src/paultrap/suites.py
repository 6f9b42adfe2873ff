"""Named verification suites run against one trap configuration.

Each time slice gets its own grid scaled to the state width sqrt(phi(t)).  The
stencil also shrinks when the state is strongly chirped (large phi_dot), since
derivatives then grow like |phi_dot| z / phi.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import verification as v
from ._parallel import pmap
from .cartesian import CartesianQN, z_extremal_naive, z_state
from .cylindrical import PolarQN
from .errors import ConfigError
from .modes import ModeSolution, integrate_mode, mode_at
from .trap import TrapConfig, axial_coupling, radial_coupling

SUITES = ("residual", "controls", "ladder", "eigen", "norm", "negative")
FULL = ("residual", "controls", "ladder", "eigen", "norm")

DEFAULT_TOLS = {
    "residual": 1e-4,
    "ladder": 1e-6,
    "eigen": 1e-5,
    "norm": 1e-6,
    "norm_3d": 1e-6,
    # controls must exceed CONTROL_FACTOR * residual tolerance
    "control_factor": 1e3,
    "naive_control": 1e-2,
}


@dataclass
class SuiteContext:
    cfg: TrapConfig
    radial: ModeSolution
    axial: ModeSolution
    times: tuple
    tols: dict = field(default_factory=lambda: dict(DEFAULT_TOLS))
    h0: float = 0.01

    @property
    def g(self):
        return radial_coupling(self.cfg)

    @property
    def g3(self):
        return axial_coupling(self.cfg)


def build_context(cfg: TrapConfig, times, ic=None, tols=None, h0=0.01, t_ic=0.0) -> SuiteContext:
    """Integrate both modes over a span covering ``times`` plus probe margins."""
    times = tuple(float(t) for t in times)
    if not times:
        raise ConfigError("verification needs at least one time")
    ic = ic or {}
    lo = min(min(times), t_ic) - 0.5
    hi = max(max(times), t_ic) + 0.5
    radial = integrate_mode(radial_coupling(cfg), ic.get("radial"), (lo, hi), t_ic=t_ic)
    axial = integrate_mode(axial_coupling(cfg), ic.get("axial"), (lo, hi), t_ic=t_ic, axis="axial")
    merged = dict(DEFAULT_TOLS)
    merged.update(tols or {})
    return SuiteContext(cfg, radial, axial, times, merged, h0)


def _width(mode, t):
    _, _, phi, phi_dot, _ = mode_at(mode, t)
    return math.sqrt(phi), phi_dot


def _stencil(mode, t, h0, s_max=6.0):
    sq, phi_dot = _width(mode, t)
    return h0 * min(1.0, sq / (1.0 + 0.5 * abs(phi_dot) * s_max))


def _line_grid(mode, t, half_sigmas, h0, min_count=201, max_count=20001):
    sq, _ = _width(mode, t)
    h = _stencil(mode, t, h0)
    L = half_sigmas * sq
    n = int(min(max(2 * L / h + 1, min_count), max_count))
    return v.GridSpec([(-L, L, n)], times=(t,), stencil=(h,))


def _per_slice(ctx, fn):
    """Run ``fn(t) -> report | list[report]`` per time and merge by check name."""
    per_time = pmap(fn, ctx.times)
    per_time = [r if isinstance(r, list) else [r] for r in per_time]
    out = []
    for group in zip(*per_time):
        out.append(v.merge_reports(list(group)))
    return out


def residual_checks(ctx: SuiteContext, n_max_z=5, n_max_x=3, polar_max=3):
    tol = ctx.tols["residual"]
    reps = []
    for n in range(n_max_z + 1):
        reps += _per_slice(ctx, lambda t, n=n: v.schrodinger_residual_1d(
            v.z_sampler(ctx.axial, n), ctx.g3, _line_grid(ctx.axial, t, 7.0, ctx.h0), tol,
            name="schrodinger_z", params={"n": n}))
    for n in range(n_max_x + 1):
        reps += _per_slice(ctx, lambda t, n=n: v.schrodinger_residual_1d(
            v.z_sampler(ctx.radial, n), ctx.g, _line_grid(ctx.radial, t, 7.0, ctx.h0), tol,
            name="schrodinger_x", params={"n": n}))
    for qn in itertools.product(range(3), repeat=3):
        reps += _per_slice(ctx, lambda t, qn=qn: v.schrodinger_residual_3d_cartesian(
            v.psi_sampler((ctx.radial, ctx.axial), CartesianQN(*qn)), (ctx.g, ctx.g3),
            _box_grid(ctx, t), tol, name="schrodinger_3d", params={"qn": list(qn)}))
    for n, m in itertools.product(range(polar_max + 1), repeat=2):
        reps += _per_slice(ctx, lambda t, n=n, m=m: v.schrodinger_residual_polar(
            v.omega_sampler(ctx.radial, PolarQN(n, m)), ctx.g, _polar_grid(ctx, t), tol,
            name="schrodinger_polar", params={"n": n, "m": m}))
    return reps


def _box_grid(ctx, t, count=9, sigmas=3.0):
    sr, sz = _width(ctx.radial, t)[0], _width(ctx.axial, t)[0]
    hr, hz = _stencil(ctx.radial, t, ctx.h0), _stencil(ctx.axial, t, ctx.h0)
    return v.GridSpec([(-sigmas * sr, sigmas * sr, count)] * 2 + [(-sigmas * sz, sigmas * sz, count)],
                      times=(t,), stencil=(hr, hr, hz))


def _polar_grid(ctx, t, n_r=60, n_theta=16):
    sr = _width(ctx.radial, t)[0]
    hr = _stencil(ctx.radial, t, ctx.h0)
    return v.GridSpec([(v.AXIS_GUARD * hr, 6.0 * sr, n_r), (-math.pi, math.pi, n_theta)],
                      times=(t,), stencil=(hr, 0.01), periodic=(False, True))


def _xy_grid(ctx, t, count=25, sigmas=4.0):
    sr = _width(ctx.radial, t)[0]
    h = _stencil(ctx.radial, t, ctx.h0)
    return v.GridSpec([(-sigmas * sr, sigmas * sr, count)] * 2, times=(t,), stencil=(h, h))


def control_checks(ctx: SuiteContext):
    tol = ctx.tols["residual"]
    threshold = ctx.tols["control_factor"] * tol
    reps = []
    reps += [r.as_control(threshold) for r in _per_slice(ctx, lambda t: v.schrodinger_residual_1d(
        v.wrong_width_sampler(ctx.axial), ctx.g3, _line_grid(ctx.axial, t, 7.0, ctx.h0), tol,
        name="wrong_width_z"))]
    reps += [r.as_control(ctx.tols["naive_control"]) for r in _per_slice(
        ctx, lambda t: v.schrodinger_residual_1d(
            lambda z, s: z_extremal_naive(ctx.axial, z, s), ctx.g3,
            _line_grid(ctx.axial, t, 7.0, ctx.h0), tol, name="naive_phase_z"))]
    reps += [r.as_control(threshold) for r in _per_slice(ctx, lambda t: v.schrodinger_residual_polar(
        v.wrong_angle_sampler(ctx.radial, PolarQN(2, 1)), ctx.g, _polar_grid(ctx, t), tol,
        name="wrong_angle_polar", params={"n": 2, "m": 1}))]
    # radial mode used for z
    reps += [r.as_control(threshold) for r in _per_slice(ctx, lambda t: v.schrodinger_residual_3d_cartesian(
        v.psi_sampler((ctx.radial, ctx.radial), CartesianQN(0, 0, 0)), (ctx.g, ctx.g3),
        _box_grid(ctx, t), tol, name="mismatched_modes_3d"))]
    return reps


def negative_checks(ctx: SuiteContext):
    """The wrong-width Gaussian judged as if it were a solution; always fails."""
    tol = ctx.tols["residual"]
    return _per_slice(ctx, lambda t: v.schrodinger_residual_1d(
        v.wrong_width_sampler(ctx.axial), ctx.g3, _line_grid(ctx.axial, t, 7.0, ctx.h0), tol,
        name="injected_wrong_width_z"))


def ladder_checks(ctx: SuiteContext, n_max=3):
    tol = ctx.tols["ladder"]
    h0 = ctx.h0 / 2
    reps = []
    for n in range(n_max + 1):
        reps += _per_slice(ctx, lambda t, n=n: v.ladder_check_z(
            ctx.axial, n, _line_grid(ctx.axial, t, 10.0, h0), tol))
    reps += _per_slice(ctx, lambda t: v.commutator_check(
        ctx.axial, v.default_test_functions(ctx.axial), _line_grid(ctx.axial, t, 10.0, h0), tol))
    for qn in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 2)]:
        reps += _per_slice(ctx, lambda t, qn=qn: v.polar_ladder_check(
            ctx.radial, PolarQN(*qn), _xy_grid(ctx, t, count=25, sigmas=5.0), tol))
    return reps


def eigen_checks(ctx: SuiteContext, n_max=3):
    tol = ctx.tols["eigen"]
    reps = []
    for n, m in itertools.product(range(n_max + 1), repeat=2):
        reps += _per_slice(ctx, lambda t, n=n, m=m: v.eigen_check(
            ctx.radial, PolarQN(n, m), _xy_grid(ctx, t), tol))
    return reps


def norm_checks(ctx: SuiteContext):
    tol, tol3 = ctx.tols["norm"], ctx.tols["norm_3d"]
    times = ctx.times
    reps = []

    def line(mode):
        return lambda t: v.GridSpec([(-14 * _width(mode, t)[0], 14 * _width(mode, t)[0], 2001)])

    def box(t):
        sr, sz = _width(ctx.radial, t)[0], _width(ctx.axial, t)[0]
        return v.GridSpec([(-12 * sr, 12 * sr, 121)] * 2 + [(-12 * sz, 12 * sz, 121)])

    def disk(t):
        sr = _width(ctx.radial, t)[0]
        return v.GridSpec([(0.0, 14 * sr, 1401), (-math.pi, math.pi, 32)], periodic=(False, True))

    for n in range(6):
        reps.append(v.norm_conservation(v.z_sampler(ctx.axial, n), "cartesian", line(ctx.axial),
                                        times, tol, name=f"norm_z{n}"))
    reps.append(v.norm_conservation(v.z_sampler(ctx.radial, 2), "cartesian", line(ctx.radial),
                                    times, tol, name="norm_x2"))
    reps.append(v.norm_conservation(v.psi_sampler((ctx.radial, ctx.axial), CartesianQN(1, 1, 1)),
                                    "cartesian", box, times, tol3, name="norm_psi111"))
    for n, m in itertools.product(range(3), repeat=2):
        reps.append(v.norm_conservation(v.omega_sampler(ctx.radial, PolarQN(n, m)), "cylindrical",
                                        disk, times, tol, name=f"norm_omega{n}{m}"))
    reps.append(orthogonality_check(ctx, times[0], tol))
    return reps


def orthogonality_check(ctx: SuiteContext, t: float, tol: float, n_max: int = 6):
    sz = _width(ctx.axial, t)[0]
    grid = v.GridSpec([(-14 * sz, 14 * sz, 2001)], times=(t,))
    (z,) = grid.coords()
    w = v.quadrature_weights(grid)
    states = np.array([z_state(ctx.axial, n, z, t) for n in range(n_max + 1)])
    gram = (np.conj(states) * w) @ states.T
    dev = np.abs(gram - np.eye(n_max + 1))
    return v.ResidualReport("orthogonality_z", float(dev.max()), float(np.sqrt(np.mean(dev**2))),
                            float(dev.max()), int(dev.size), float(tol),
                            params={"n_max": n_max, "t": t}, grid=grid.summary())


_RUNNERS = {
    "residual": residual_checks,
    "controls": control_checks,
    "ladder": ladder_checks,
    "eigen": eigen_checks,
    "norm": norm_checks,
    "negative": negative_checks,
}


def parse_suite(selector: str) -> tuple:
    names = []
    for part in selector.split(","):
        part = part.strip()
        if not part:
            continue
        if part == "full":
            names.extend(FULL)
        elif part in _RUNNERS:
            names.append(part)
        else:
            raise ConfigError(f"unknown suite {part!r}; choose from full, {', '.join(SUITES)}")
    if not names:
        raise ConfigError("empty suite selector")
    return tuple(dict.fromkeys(names))


def run_suite(ctx: SuiteContext, selector: str = "full") -> list[v.ResidualReport]:
    reports = []
    for name in parse_suite(selector):
        reports.extend(_RUNNERS[name](ctx))
    return reports
