import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paultrap.errors import ConfigError, NumericsError, SpanError
from paultrap.modes import (
    _batched_monodromy_trace,
    _classify,
    default_ic,
    floquet_ic,
    floquet_stability,
    integrate_mode,
    mathieu_coupling,
    mode_at,
    sho_mode,
    stability_boundary,
    stability_scan,
    wronskian,
)
from paultrap.trap import TrapConfig, axial_coupling, radial_coupling


def closed_form(t, w=1.0):
    return (2 * w) ** -0.5 * np.exp(1j * w * t)


def test_sho_mode_is_normalised():
    m = sho_mode(2.0, np.linspace(0, 3, 31))
    assert np.allclose(m.wronskian(), -1j, atol=1e-15)
    assert np.allclose(m.phi, 0.5)
    assert np.allclose(m.theta, 2.0 * m.t)
    with pytest.raises(ConfigError):
        sho_mode(-1.0, [0, 1])


def test_default_ic():
    xi0, xid0 = default_ic(lambda t: 2.0)
    assert xi0 == pytest.approx(0.5)
    assert xid0 == pytest.approx(1j)
    assert wronskian(xi0, xid0) == pytest.approx(-1j)
    # inverted coupling falls back to w = 1
    xi0, xid0 = default_ic(lambda t: -1.0)
    assert (xi0, xid0) == pytest.approx((2 ** -0.5, 1j * 2 ** -0.5))


def test_integrated_sho_matches_closed_form(unit_sho_integrated):
    m = unit_sho_integrated
    assert np.max(np.abs(m.xi - closed_form(m.t))) < 1e-9
    assert np.max(np.abs(m.theta - m.t)) < 1e-9
    assert m.wronskian_drift < 1e-11


def test_backward_integration_from_t_ic():
    m = integrate_mode(lambda t: 0.5, (closed_form(0.0), 1j * closed_form(0.0)), (-4.0, 3.0), t_ic=0.0)
    assert m.t[0] == -4.0 and m.t[-1] == 3.0
    assert np.all(np.diff(m.t) > 0)
    assert np.max(np.abs(m.xi - closed_form(m.t))) < 1e-9
    # branch anchored at t_ic, so theta = t also for negative t
    assert np.max(np.abs(m.theta - m.t)) < 1e-9


def test_samples_argument():
    m = integrate_mode(lambda t: 0.5, None, (0.0, 2.0), samples=41)
    assert m.t.size == 41
    assert m.t[1] == pytest.approx(0.05)


@pytest.mark.parametrize("kw", [
    {"ic": (1.0, 1.0j)},
    {"tspan": (1.0, 1.0)},
    {"tspan": (0.0, 1.0), "t_ic": 2.0},
])
def test_integrate_rejects(kw):
    kw.setdefault("tspan", (0.0, 1.0))
    with pytest.raises(ConfigError):
        integrate_mode(lambda t: 0.5, **kw)


def test_unstable_growth_trips_drift_guard():
    with pytest.raises(NumericsError, match="Wronskian"):
        integrate_mode(lambda t: -1.0, None, (0.0, 30.0))


def test_coarse_sampling_is_rejected():
    with pytest.raises(NumericsError, match="phase"):
        integrate_mode(lambda t: 50.0, None, (0.0, 5.0), samples=11)


def test_mode_at_interpolates(unit_sho_integrated):
    m = unit_sho_integrated
    t = np.linspace(0.0, 12.0, 997)
    xi, xid, phi, phid, theta = mode_at(m, t)
    assert np.max(np.abs(xi - closed_form(t))) < 1e-9
    assert np.max(np.abs(xid - 1j * closed_form(t))) < 1e-9
    assert np.max(np.abs(phi - 1.0)) < 1e-9
    assert np.max(np.abs(phid)) < 1e-9
    assert np.max(np.abs(theta - t)) < 1e-9
    scalar = mode_at(m, 0.123)
    assert all(isinstance(v, (float, complex)) for v in scalar)
    with pytest.raises(SpanError):
        mode_at(m, 12.5)
    with pytest.raises(SpanError):
        mode_at(m, -0.1)


def test_linearity():
    g = mathieu_coupling(0.1, 0.4)
    a = (0.3 + 0.1j, -0.2 + 0.5j)
    b = (-0.7j, 1.1)
    ma = integrate_mode(g, a, (0, 5), enforce_wronskian=False)
    mb = integrate_mode(g, b, (0, 5), enforce_wronskian=False)
    mab = integrate_mode(g, (a[0] + 2 * b[0], a[1] + 2 * b[1]), (0, 5), enforce_wronskian=False)
    assert np.max(np.abs(mab.xi - (ma.xi + 2 * mb.xi))) < 1e-9


@settings(max_examples=15, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0, 2 * math.pi))
def test_wronskian_preserved_for_any_normalised_ic(w, phase):
    # xi = r e^{i phase} with xi_dot chosen so W = -i
    xi0 = (2 * w) ** -0.5 * np.exp(1j * phase)
    xid0 = 1j * w * xi0 + 0.3 * xi0
    m = integrate_mode(mathieu_coupling(0.05, 0.3), (xi0, xid0), (0, 10))
    assert m.wronskian_drift <= 1e-9


def test_floquet_ic_gives_periodic_phi(driven_cfg):
    g = radial_coupling(driven_cfg)
    T = driven_cfg.period
    ic = floquet_ic(g, T)
    assert wronskian(*ic) == pytest.approx(-1j, abs=1e-12)
    m = integrate_mode(g, ic, (0.0, 4 * T + 0.1))
    t = np.linspace(0, T, 37)
    phi0 = mode_at(m, t)[2]
    for k in (1, 2, 3):
        assert np.max(np.abs(mode_at(m, t + k * T)[2] - phi0)) < 1e-8


def test_floquet_ic_requires_stability():
    with pytest.raises(NumericsError):
        floquet_ic(lambda t: -1.0, 1.0)


def test_floquet_constant_coupling_oracle():
    # y'' + y = 0 over period 1: trace 2 cos 1, det 1
    res = floquet_stability(lambda t: 0.5, 1.0)
    assert res.trace == pytest.approx(2 * math.cos(1.0), abs=1e-11)
    assert res.determinant == pytest.approx(1.0, abs=1e-11)
    assert res.stable and not res.marginal
    assert all(abs(abs(m) - 1) < 1e-10 for m in res.multipliers)
    assert all(isinstance(m, complex) for m in res.multipliers)
    with pytest.raises(ConfigError):
        floquet_stability(lambda t: 0.5, 0.0)


def test_classify_marginal():
    r = _classify(2.0, 1.0)
    assert r.marginal and not r.stable
    r = _classify(-2.0 + 1e-12, 1.0)
    assert r.marginal and not r.stable
    r = _classify(2.5, 1.0)
    assert not r.marginal and not r.stable
    assert abs(r.multipliers[0] * r.multipliers[1] - 1) < 1e-12


@pytest.mark.parametrize("a, q, stable", [
    (0.0, 0.5, True),
    (0.0, 0.95, False),
    (-0.5, 0.0, False),
    (0.2, 0.2, True),
    (1.0, 0.0, False),  # resonance tongue tip, |trace| = 2
])
def test_mathieu_classics(a, q, stable):
    assert floquet_stability(mathieu_coupling(a, q), math.pi).stable is stable


def test_stability_boundary_oracle():
    assert stability_boundary(0.0, 0.5, 1.0) == pytest.approx(0.908046, abs=2e-5)
    with pytest.raises(ConfigError):
        stability_boundary(0.0, 0.2, 0.3)


def test_batched_traces_match_adaptive():
    rng = np.random.default_rng(7)
    a = rng.uniform(-0.5, 2.0, 12)
    q = rng.uniform(0, 1.5, 12)
    # Mathieu in tau: alpha = a, beta = -2q, omega = 2
    tr, det = _batched_monodromy_trace(a, -2 * q, 2.0)
    ref = [floquet_stability(mathieu_coupling(ai, qi), math.pi).trace for ai, qi in zip(a, q)]
    assert np.allclose(tr, ref, rtol=1e-7, atol=1e-8)
    assert np.allclose(det, 1.0, atol=1e-7)


def test_stability_scan_shape_and_consistency(driven_cfg):
    chart = stability_scan(driven_cfg, (0.0, 0.2, 5), (0.1, 0.8, 4))
    assert chart.trace_r.shape == (5, 4)
    assert len(list(chart.rows())) == 20
    i, j = 3, 2
    cfg = TrapConfig.from_mathieu(chart.p1[i], chart.p2[j])
    ref_r = floquet_stability(radial_coupling(cfg), cfg.period)
    ref_z = floquet_stability(axial_coupling(cfg), cfg.period)
    assert chart.trace_r[i, j] == pytest.approx(ref_r.trace, abs=1e-7)
    assert chart.trace_z[i, j] == pytest.approx(ref_z.trace, abs=1e-7)
    assert chart.stable_r[i, j] == ref_r.stable
    assert np.array_equal(chart.stable_trap, chart.stable_r & chart.stable_z)


def test_stability_scan_independent_of_threads(driven_cfg, monkeypatch):
    monkeypatch.setenv("PAULTRAP_THREADS", "1")
    a = stability_scan(driven_cfg, (0.0, 0.2, 7), (0.1, 0.8, 6))
    monkeypatch.setenv("PAULTRAP_THREADS", "3")
    b = stability_scan(driven_cfg, (0.0, 0.2, 7), (0.1, 0.8, 6))
    assert np.array_equal(a.trace_r, b.trace_r) and np.array_equal(a.trace_z, b.trace_z)


@pytest.mark.parametrize("s1, s2, params", [
    ((0, 1, 0), (0, 1, 3), ("a_r", "q_r")),
    ((0, 1, 1), (0, 1, 3), ("a_r", "q_r")),
    ((1, 0, 3), (0, 1, 3), ("a_r", "q_r")),
    ((0, 1, 3), (0, 1, 3), ("a_r", "a_r")),
    ((0, 1, 3), (0, 1, 3), ("a_r", "bogus")),
    ((0, 1, 3), (-1, 0, 3), ("a_r", "q_r")),
])
def test_stability_scan_rejects(driven_cfg, s1, s2, params):
    with pytest.raises(ConfigError):
        stability_scan(driven_cfg, s1, s2, params=params)


def test_vdc_vac_sweep(driven_cfg):
    chart = stability_scan(driven_cfg, (-0.5, 0.5, 3), (0.0, 1.0, 3), params=("vdc", "vac"))
    # vac = 0 column: static trap, never stable in both axes
    assert not chart.stable_trap[:, 0].any()
