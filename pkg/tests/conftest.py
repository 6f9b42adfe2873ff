import pytest

from paultrap.modes import integrate_mode, sho_mode
from paultrap.trap import TrapConfig, axial_coupling, radial_coupling

# static trap (radial oscillator, inverted axial) and a driven stable trap
SHO_DOC = {"e": 1.0, "r0": 1.0, "vdc": 1.0, "vac": 0.0, "omega": 2.0}
DRIVEN_A, DRIVEN_Q = 0.02, 0.3
SHO_TIMES = (0.3, 0.7, 1.2)
DRIVEN_TIMES = (0.5, 1.7, 3.1)


@pytest.fixture(scope="session")
def sho_cfg():
    return TrapConfig.from_dict(SHO_DOC)


@pytest.fixture(scope="session")
def driven_cfg():
    return TrapConfig.from_mathieu(DRIVEN_A, DRIVEN_Q)


@pytest.fixture(scope="session")
def driven_modes(driven_cfg):
    span = (-1.0, 12.0)
    radial = integrate_mode(radial_coupling(driven_cfg), None, span, t_ic=0.0)
    axial = integrate_mode(axial_coupling(driven_cfg), None, span, t_ic=0.0, axis="axial")
    return radial, axial


@pytest.fixture(scope="session")
def unit_sho():
    """Closed-form omega = 1 mode on a fine grid."""
    return sho_mode(1.0, [k * 0.01 for k in range(-100, 1201)])


@pytest.fixture(scope="session")
def unit_sho_integrated():
    return integrate_mode(lambda t: 0.5, (2 ** -0.5, 1j * 2 ** -0.5), (0.0, 12.0))




_CRITERIA_KEY = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(k, passed, detail)``; asserts ``passed``."""
    log = request.config.stash.setdefault(_CRITERIA_KEY, [])

    def record(k, passed, detail):
        line = f"criterion {k:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        log.append((k, line))
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_CRITERIA_KEY, [])
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
