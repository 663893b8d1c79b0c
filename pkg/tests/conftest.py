import pytest

from twistact.kinematics import KinematicParams

# builds: (L, S, measured bundle radius)
N2 = KinematicParams(L=23.20, S=5.0, r=0.235)
N4 = KinematicParams(L=23.42, S=5.0, r=0.35)
N6 = KinematicParams(L=22.85, S=5.0, r=0.43)
N8 = KinematicParams(L=23.30, S=5.0, r=0.495)


@pytest.fixture
def n6():
    return N6


@pytest.fixture
def n2():
    return N2


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
