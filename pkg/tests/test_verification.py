import cmath
import math

import numpy as np
import pytest

from paultrap import verification as v
from paultrap.cylindrical import PolarQN
from paultrap.errors import ConfigError, CoverageError
from paultrap.suites import DEFAULT_TOLS, build_context, parse_suite, run_suite
from paultrap.trap import axial_coupling

G_UNIT = lambda t: 0.5  # noqa: E731  unit-frequency static coupling


def line(L=8.0, h=0.01, times=(0.4, 1.3)):
    return v.GridSpec([(-L, L, int(round(2 * L / h)) + 1)], times=times)


def test_grid_validation():
    with pytest.raises(ConfigError):
        v.GridSpec([(0, 1, 5)])
    with pytest.raises(ConfigError):
        v.GridSpec([(1, 0, 11)])
    with pytest.raises(ConfigError):
        v.GridSpec([(0, 1, 11)], stencil=(0.0,))
    with pytest.raises(ConfigError):
        v.GridSpec([(0, 1, 11)], periodic=(True, False))
    g = v.GridSpec([(0, 2 * math.pi, 16)], periodic=(True,))
    assert g.spacing[0] == pytest.approx(2 * math.pi / 16)
    assert g.coords()[0][-1] < 2 * math.pi
    assert g.interior().all()
    g = v.GridSpec([(0, 1, 11)])
    assert g.interior().sum() == 7


def test_stencils_fourth_order():
    f = lambda x, t: np.sin(x) + 0j  # noqa: E731
    x = np.array([0.3, 1.1])
    errs = [np.max(np.abs(v.d2(f, 0, h)(x, 0.0) + np.sin(x))) for h in (0.1, 0.05)]
    assert 14 < errs[0] / errs[1] < 18
    assert np.max(np.abs(v.d1(f, 0, 0.01)(x, 0.0) - np.cos(x))) < 1e-9
    g = lambda x, t: np.exp(-2j * t) * x  # noqa: E731
    assert abs(v.d_t(g)(1.0, 0.7) - (-2j * np.exp(-1.4j))) < 1e-9


def test_sho_residual_passes_and_control_fails(unit_sho):
    grid = line()
    ok = v.schrodinger_residual_1d(v.z_sampler(unit_sho, 3), G_UNIT, grid, 1e-4)
    assert ok.passed and ok.max_abs < 1e-5
    bad = v.schrodinger_residual_1d(v.wrong_width_sampler(unit_sho), G_UNIT, grid, 1e-4)
    assert not bad.passed and bad.max_abs > 0.1
    ctrl = bad.as_control(0.1)
    assert ctrl.passed and ctrl.check.startswith("control_") and ctrl.expect == "above"


def test_global_phase_invariance(driven_cfg, driven_modes):
    _, axial = driven_modes
    grid = line(L=6.0, times=(0.8,))
    g3 = axial_coupling(driven_cfg)
    base = v.z_sampler(axial, 2)
    rot = lambda z, t: cmath.exp(0.9j) * base(z, t)  # noqa: E731
    a = v.schrodinger_residual_1d(base, g3, grid, 1e-4)
    b = v.schrodinger_residual_1d(rot, g3, grid, 1e-4)
    assert a.max_abs == pytest.approx(b.max_abs, rel=1e-10)
    assert a.l2 == pytest.approx(b.l2, rel=1e-10)


def test_report_dict_and_merge():
    r1 = v.ResidualReport("x", 1e-6, 1e-7, 2e-7, 10, 1e-4, params={"n": 1})
    r2 = v.ResidualReport("x", 3e-6, 2e-7, 1e-7, 30, 1e-4, params={"n": 1})
    m = v.merge_reports([r1, r2])
    assert m.max_abs == 3e-6 and m.l2 == 2e-7 and m.n_points == 40
    assert m.rms == pytest.approx(math.sqrt((1e-14 * 10 + 4e-14 * 30) / 40))
    d = m.to_dict()
    assert {"check", "params", "max_abs", "rms", "tol", "pass"} <= set(d)
    assert d["pass"] is True


def test_report_nonfinite():
    r = v.ResidualReport("x", math.inf, math.inf, math.inf, 1, 1e-4)
    assert not r.passed
    assert r.as_control(1.0).passed
    r = v.ResidualReport("x", math.nan, math.nan, math.nan, 1, 1e-4)
    assert not r.passed


def test_polar_residual_axis_guard(unit_sho):
    f = v.omega_sampler(unit_sho, PolarQN(1, 2))
    with pytest.raises(ConfigError, match="axis"):
        v.schrodinger_residual_polar(f, G_UNIT, v.GridSpec([(0.0, 5, 60), (0, 6, 16)]), 1e-4)
    grid = v.GridSpec([(0.04, 5, 60), (-math.pi, math.pi, 16)], times=(0.5,), stencil=(0.01, 0.01))
    rep = v.schrodinger_residual_polar(f, G_UNIT, grid, 1e-4)
    assert rep.passed


def test_ladder_and_commutator_sho(unit_sho):
    grid = line(L=10.0, h=0.005, times=(0.5,))
    for n in range(4):
        assert all(r.passed for r in v.ladder_check_z(unit_sho, n, grid, 1e-6))
    reps = v.commutator_check(unit_sho, v.default_test_functions(unit_sho), grid, 1e-6)
    assert len(reps) == 3 and all(r.passed for r in reps)


def test_ladder_detects_wrong_target(unit_sho):
    # J_+ Z_1 must be sqrt(2) Z_2; Z_1 alone is far from that
    grid = line(L=10.0, h=0.005, times=(0.5,))
    jp = v.j_plus(unit_sho, v.z_sampler(unit_sho, 1), 0, 0.005)
    rep = v._run("probe", jp, grid, 1e-6, {}, metric="l2", target=v.z_sampler(unit_sho, 1))
    assert not rep.passed


def test_eigen_sho(unit_sho):
    grid = v.GridSpec([(-4, 4, 25)] * 2, times=(0.6,), stencil=(0.01, 0.01))
    reps = v.eigen_check(unit_sho, PolarQN(2, 1), grid, 1e-5)
    assert [r.check for r in reps] == ["eigen_Lz", "eigen_K", "eigen_f", "eigen_d",
                                       "casimir_a", "casimir_c"]
    assert all(r.passed for r in reps), [(r.check, r.max_abs) for r in reps]
    wrong = v.eigen_check(unit_sho, PolarQN(2, 1), grid, 1e-5,
                          sampler=v.omega_xy_sampler(unit_sho, PolarQN(1, 1)))
    assert not wrong[0].passed


def test_polar_ladder_sho(unit_sho):
    grid = v.GridSpec([(-5, 5, 25)] * 2, times=(0.6,), stencil=(0.005, 0.005))
    reps = v.polar_ladder_check(unit_sho, PolarQN(0, 0), grid, 1e-6)
    assert all(r.passed for r in reps)


def test_angular_eigen(unit_sho):
    grid = v.GridSpec([(0.1, 4, 20), (0, 2 * math.pi, 32)], times=(0.2,), stencil=(0.01, 0.01))
    rep = v.angular_eigen_check(v.omega_sampler(unit_sho, PolarQN(0, 3)), 3, grid, 1e-5)
    assert rep.passed


def test_quadrature_weights():
    g = v.GridSpec([(0, 2, 21)])
    w = v.quadrature_weights(g)
    x = g.coords()[0]
    assert np.sum(w * x**3) == pytest.approx(4.0, abs=1e-14)
    g = v.GridSpec([(0, 1, 101), (0, 2 * math.pi, 16)], periodic=(False, True))
    assert np.sum(v.quadrature_weights(g, "cylindrical")) == pytest.approx(math.pi, abs=1e-12)


def test_norm_conservation(unit_sho):
    rep = v.norm_conservation(v.z_sampler(unit_sho, 4), "cartesian", line(L=14.0, h=0.01),
                              (0.1, 0.9, 2.0), 1e-6)
    assert rep.passed and len(rep.params["norms"]) == 3
    with pytest.raises(CoverageError):
        v.norm_conservation(v.z_sampler(unit_sho, 4), "cartesian", line(L=3.0), (0.1,), 1e-6)
    with pytest.raises(ConfigError):
        v.norm_conservation(v.z_sampler(unit_sho, 0), "spherical", line(), (0.1,), 1e-6)


def test_cylindrical_norm(unit_sho):
    grid = v.GridSpec([(0.0, 12.0, 1201), (-math.pi, math.pi, 32)])
    rep = v.norm_conservation(v.omega_sampler(unit_sho, PolarQN(2, 3)), "cylindrical",
                              grid, (0.3, 1.1), 1e-6)
    assert rep.passed, rep.params


def test_inner_product(unit_sho):
    grid = line(L=12.0, h=0.01)
    ip = v.inner_product(v.z_sampler(unit_sho, 1), v.z_sampler(unit_sho, 3), grid, 0.4)
    assert abs(ip) < 1e-12
    ip = v.inner_product(v.z_sampler(unit_sho, 2), v.z_sampler(unit_sho, 2), grid, 0.4)
    assert ip == pytest.approx(1.0, abs=1e-10)


def test_parse_suite():
    assert parse_suite("full") == ("residual", "controls", "ladder", "eigen", "norm")
    assert parse_suite("ladder, residual,ladder") == ("ladder", "residual")
    with pytest.raises(ConfigError):
        parse_suite("bogus")
    with pytest.raises(ConfigError):
        parse_suite(" , ")


def test_suite_on_driven_config(driven_cfg):
    ctx = build_context(driven_cfg, (0.5, 2.0))
    reps = run_suite(ctx, "residual,controls")
    assert reps and all(r.passed for r in reps), [r.check for r in reps if not r.passed]
    neg = run_suite(ctx, "negative")
    assert neg and not any(r.passed for r in neg)
    assert set(DEFAULT_TOLS) >= {"residual", "ladder", "eigen", "norm"}
