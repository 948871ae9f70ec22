import numpy as np
import pytest

from ciq.lattice import LatticeGrid


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=[(3, 1.0), (5, 0.5)], ids=["n3", "n5"])
def grid(request):
    n, h = request.param
    return LatticeGrid(n, h)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
