"""``paultrap`` command line: evolve | stability | sample | verify | lattice.

Exit codes: 0 success, 1 bad configuration, 2 numerical failure (Wronskian
drift), 3 quantum-number selection rule, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import io
from .cartesian import CartesianQN, psi_cartesian, xy_state, z_state
from .cylindrical import (
    CylindricalQN,
    PolarQN,
    lattice,
    omega_state,
    radial_state,
    theta_factor,
)
from .errors import ConfigError, PaulTrapError
from .modes import floquet_ic, integrate_mode, stability_scan
from .suites import DEFAULT_TOLS, build_context, run_suite
from .trap import TRAP_KEYS, TrapConfig, axial_coupling, radial_coupling

log = logging.getLogger("paultrap")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICS, EXIT_SELECTION, EXIT_VERIFY = 0, 1, 2, 3, 4

RUN_KEYS = ("trap", "ic", "out", "t_end", "samples", "grid", "times", "state", "suite",
            "sweep", "sweep_params", "tol", "lattice_max")
DEFAULT_TIMES = (0.3, 0.7, 1.2)


@dataclass
class RunConfig:
    trap: TrapConfig
    ic: dict = field(default_factory=dict)
    out: str = "out"
    t_end: float = 10.0
    samples: int = 1001
    grid: str | None = None
    times: str | None = None
    state: str | None = None
    suite: str = "full"
    sweep: str | None = None
    sweep_params: str = "a_r,q_r"
    tol: dict = field(default_factory=dict)
    lattice_max: int = 10

    @classmethod
    def from_dict(cls, doc) -> "RunConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        if "trap" not in doc:
            # a bare trap document
            return cls(trap=TrapConfig.from_dict(doc))
        unknown = set(doc) - set(RUN_KEYS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kw = {k: doc[k] for k in RUN_KEYS if k in doc and k != "trap"}
        cfg = cls(trap=TrapConfig.from_dict(doc["trap"]), **kw)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(doc)

    def validate(self):
        if not isinstance(self.ic, dict) or set(self.ic) - {"radial", "axial"}:
            raise ConfigError("ic must map 'radial'/'axial' to [re xi, im xi, re xidot, im xidot] "
                              "or 'floquet'")
        bad_tol = set(self.tol) - set(DEFAULT_TOLS) - {"wronskian"}
        if bad_tol:
            raise ConfigError(f"unknown tolerance keys: {sorted(bad_tol)}")
        if not (isinstance(self.t_end, (int, float)) and self.t_end > 0):
            raise ConfigError("t_end must be positive")
        if not (isinstance(self.samples, int) and self.samples >= 2):
            raise ConfigError("samples must be an integer >= 2")


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {what}: {text!r}") from exc
    if not vals or not all(math.isfinite(x) for x in vals):
        raise ConfigError(f"bad {what}: {text!r}")
    return vals


def parse_ranges(text: str, what: str = "grid") -> list[tuple[float, float, int]]:
    """``"min:max:count[,min:max:count...]"``"""
    out = []
    for part in text.split(","):
        bits = part.strip().split(":")
        if len(bits) != 3:
            raise ConfigError(f"bad {what} axis {part!r}; expected min:max:count")
        try:
            lo, hi, n = float(bits[0]), float(bits[1]), int(bits[2])
        except ValueError as exc:
            raise ConfigError(f"bad {what} axis {part!r}") from exc
        if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
            raise ConfigError(f"bad {what} range {part!r}")
        if n < 2:
            raise ConfigError(f"{what} axis {part!r} needs count >= 2")
        out.append((lo, hi, n))
    return out


def parse_state(text: str):
    """``cart:nx,ny,nz`` | ``cyl:nr,lz,nz`` | ``polar:n,m`` | ``z:n`` | ``x:n``."""
    try:
        kind, nums = text.split(":", 1)
        vals = [int(x) for x in nums.split(",")]
    except ValueError as exc:
        raise ConfigError(f"bad state spec {text!r}") from exc
    arity = {"cart": 3, "cyl": 3, "polar": 2, "z": 1, "x": 1}
    if kind not in arity or len(vals) != arity[kind]:
        raise ConfigError(f"bad state spec {text!r}")
    if kind == "cart":
        return kind, CartesianQN(*vals)
    if kind == "cyl":
        if vals[2] < 0:
            raise ConfigError("n_z must be non-negative")
        return kind, (CylindricalQN(vals[0], vals[1]), vals[2])
    if kind == "polar":
        return kind, PolarQN(*vals)
    if vals[0] < 0:
        raise ConfigError("quantum number must be non-negative")
    return kind, vals[0]


def _ic_for(cfg: RunConfig, axis: str, coupling):
    spec = cfg.ic.get(axis)
    if spec is None or spec == "default":
        return None
    if spec == "floquet":
        return floquet_ic(coupling, cfg.trap.period)
    if isinstance(spec, list) and len(spec) == 4 and all(isinstance(x, (int, float)) for x in spec):
        return complex(spec[0], spec[1]), complex(spec[2], spec[3])
    raise ConfigError(f"bad initial data for {axis}: {spec!r}")


def _ics(cfg: RunConfig) -> dict:
    return {"radial": _ic_for(cfg, "radial", radial_coupling(cfg.trap)),
            "axial": _ic_for(cfg, "axial", axial_coupling(cfg.trap))}


def _wronskian_tol(cfg: RunConfig) -> float:
    return float(cfg.tol.get("wronskian", 1e-9))


def _merge_flags(cfg: RunConfig, args) -> RunConfig:
    for name in ("out", "t_end", "samples", "grid", "times", "state", "suite", "sweep",
                 "sweep_params", "lattice_max"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    cfg.validate()
    return cfg


def _load(args) -> RunConfig:
    if args.config is None:
        raise ConfigError("--config is required")
    return _merge_flags(RunConfig.load(args.config), args)


def _modes(cfg: RunConfig, t_lo: float, t_hi: float, dt_sample: float = 0.01):
    """Radial and axial modes with initial data at t = 0, covering [t_lo, t_hi]."""
    ics = _ics(cfg)
    wtol = _wronskian_tol(cfg)
    span = (min(t_lo, 0.0), max(t_hi, 0.0))
    radial = integrate_mode(radial_coupling(cfg.trap), ics["radial"], span, t_ic=0.0,
                            dt_sample=dt_sample, wronskian_tol=wtol, axis="radial")
    axial = integrate_mode(axial_coupling(cfg.trap), ics["axial"], span, t_ic=0.0,
                           dt_sample=dt_sample, wronskian_tol=wtol, axis="axial")
    return radial, axial


def cmd_evolve(args) -> int:
    cfg = _load(args)
    t_end, n_out = float(cfg.t_end), int(cfg.samples)
    # integrate on a refinement of the output grid so output rows are knots
    k = max(1, math.ceil(t_end / (n_out - 1) / 0.01 - 1e-9))
    ics = _ics(cfg)
    out = Path(cfg.out)
    for axis, coupling in (("radial", radial_coupling(cfg.trap)), ("axial", axial_coupling(cfg.trap))):
        mode = integrate_mode(coupling, ics[axis], (0.0, t_end), samples=(n_out - 1) * k + 1,
                              wronskian_tol=_wronskian_tol(cfg), axis=axis)
        path = io.write_mode_csv(out / f"mode_{axis}.csv", _every(mode, k))
        log.info("wrote %s (wronskian drift %.2e)", path, mode.wronskian_drift)
    return EXIT_OK


def _every(mode, k: int):
    if k == 1:
        return mode
    return replace(mode, **{name: getattr(mode, name)[::k]
                            for name in ("t", "xi", "xi_dot", "xi_ddot", "phi", "phi_dot", "theta")})


def cmd_stability(args) -> int:
    cfg = _load(args)
    if not cfg.sweep:
        raise ConfigError("--sweep is required")
    axes = parse_ranges(cfg.sweep, "sweep")
    if len(axes) != 2:
        raise ConfigError("sweep needs exactly two ranges")
    params = tuple(p.strip() for p in cfg.sweep_params.split(","))
    chart = stability_scan(cfg.trap, axes[0], axes[1], params=params)
    path = io.write_chart_csv(Path(cfg.out) / "stability.csv", chart)
    log.info("wrote %s: %d cells, %d trap-stable", path, chart.stable_trap.size,
             int(chart.stable_trap.sum()))
    return EXIT_OK


def cmd_sample(args) -> int:
    cfg = _load(args)
    if not cfg.state:
        raise ConfigError("--state is required")
    kind, qn = parse_state(cfg.state)
    if not cfg.grid:
        raise ConfigError("--grid is required")
    axes = parse_ranges(cfg.grid)
    times = _parse_floats(cfg.times, "times") if cfg.times else [0.0]
    radial, axial = _modes(cfg, min(times), max(times) + 1e-6)
    coords = [np.linspace(lo, hi, n) for lo, hi, n in axes]
    out = Path(cfg.out)

    def need(k):
        if len(axes) != k:
            raise ConfigError(f"state {cfg.state!r} needs a {k}-axis grid for this output")

    if kind in ("z", "x"):
        need(1)
        mode = axial if kind == "z" else radial
        fn = z_state if kind == "z" else xy_state
        fields = [fn(mode, qn, coords[0], t) for t in times]
        path = io.write_line_csv(out / f"field_{kind}{qn}.csv", kind, coords[0], times, fields)
    elif kind == "cart":
        need(3)
        mesh = np.meshgrid(*coords, indexing="ij")
        fields = [psi_cartesian((radial, axial), qn, (*mesh, t)) for t in times]
        path = io.write_field_json(out / "psi_cartesian.json", ("x", "y", "z"), coords, times,
                                   fields, state=cfg.state)
    elif kind == "polar":
        need(2)
        r, th = np.meshgrid(*coords, indexing="ij")
        _check_r(coords[0])
        fields = [omega_state(radial, qn, r, th, t) for t in times]
        path = io.write_polar_csv(out / "omega_polar.csv", coords[0], coords[1], times, fields)
    else:
        cqn, n_z = qn
        _check_r(coords[0])
        if len(axes) == 2:
            r, th = np.meshgrid(*coords, indexing="ij")
            fields = [radial_state(radial, cqn, r, t) * theta_factor(cqn.l_z, th) for t in times]
            path = io.write_polar_csv(out / "cyl_polar.csv", coords[0], coords[1], times, fields)
        else:
            need(3)
            r, th, z = np.meshgrid(*coords, indexing="ij")
            fields = [radial_state(radial, cqn, r, t) * theta_factor(cqn.l_z, th)
                      * z_state(axial, n_z, z, t) for t in times]
            path = io.write_field_json(out / "phi_cylindrical.json", ("r", "theta", "z"), coords,
                                       times, fields, state=cfg.state)
    log.info("wrote %s", path)
    return EXIT_OK


def _check_r(r):
    if np.any(np.asarray(r) < 0):
        raise ConfigError("radial grid axis must be non-negative")


def cmd_verify(args) -> int:
    cfg = _load(args)
    times = _parse_floats(cfg.times, "times") if cfg.times else list(DEFAULT_TIMES)
    ics = _ics(cfg)
    tols = {k: v for k, v in cfg.tol.items() if k != "wronskian"}
    ctx = build_context(cfg.trap, times, ic=ics, tols=tols)
    reports = run_suite(ctx, cfg.suite)
    path = io.write_report_json(Path(cfg.out) / "report.json", reports,
                                meta={"suite": cfg.suite, "times": times,
                                      "trap": cfg.trap.to_dict()})
    failed = [r for r in reports if not r.passed]
    for r in reports:
        log.debug("%-28s %-6s %.3e (tol %.1e)", r.check, "PASS" if r.passed else "FAIL", r.value, r.tol)
    log.info("wrote %s: %d checks, %d failed", path, len(reports), len(failed))
    for r in failed:
        print(f"FAIL {r.check} {r.params} value={r.value:.3e} tol={r.tol:.1e}", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


def cmd_lattice(args) -> int:
    n_max = args.lattice_max if args.lattice_max is not None else 10
    out = args.out or "out"
    if args.config is not None:
        cfg = _load(args)
        n_max, out = cfg.lattice_max, cfg.out
    if n_max < 0:
        raise ConfigError("--lattice-max must be non-negative")
    path = io.write_lattice_csv(Path(out) / "lattice.csv", lattice(n_max))
    log.info("wrote %s", path)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors (exit 1), not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


# flags whose values may start with '-' (negative grid bounds, times)
_VALUE_FLAGS = ("--grid", "--sweep", "--times")


def _glue_values(argv):
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run or trap config")
    common.add_argument("--out", metavar="DIR", help="output directory (default: out)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="paultrap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("evolve", parents=[common], help="integrate radial and axial mode functions")
    ev.add_argument("--t-end", dest="t_end", type=float)
    ev.add_argument("--samples", type=int)
    ev.set_defaults(func=cmd_evolve)

    st = sub.add_parser("stability", parents=[common], help="Floquet stability chart")
    st.add_argument("--sweep", help='"p1min:p1max:n1,p2min:p2max:n2"')
    st.add_argument("--sweep-params", dest="sweep_params",
                    help="swept parameter names, default a_r,q_r (also vdc, vac)")
    st.set_defaults(func=cmd_stability)

    sa = sub.add_parser("sample", parents=[common], help="sample a state on a grid")
    sa.add_argument("--state", help='"cart:nx,ny,nz" | "cyl:nr,lz,nz" | "polar:n,m" | "z:n" | "x:n"')
    sa.add_argument("--grid", help='"min:max:count[,...]"')
    sa.add_argument("--times", help='"t1,t2,..."')
    sa.set_defaults(func=cmd_sample)

    ve = sub.add_parser("verify", parents=[common], help="run verification checks")
    ve.add_argument("--suite", help="full | residual,controls,ladder,eigen,norm,negative")
    ve.add_argument("--times", help='"t1,t2,..."')
    ve.set_defaults(func=cmd_verify)

    la = sub.add_parser("lattice", parents=[common], help="allowed (n, m) / (n_r, l_z) points")
    la.add_argument("--lattice-max", dest="lattice_max", type=int, help="largest n + m (default 10)")
    la.set_defaults(func=cmd_lattice)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else list(argv)))
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except PaulTrapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
