import pytest

from dgsmooth import examples as ex


@pytest.fixture(scope="session")
def algebras():
    _, bamp, phi = ex.B_AMP()
    return {
        "k": ex.k(),
        "P1": ex.P1(),
        "P2": ex.P2(),
        "K1": ex.K1(),
        "D2": ex.D2(),
        "AMP": phi.source,
        "B-AMP": bamp,
        "phi_amp": phi,
    }


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
