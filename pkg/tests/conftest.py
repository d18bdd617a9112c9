import numpy as np
import pytest

from focklab.grids import ComplexGrid, RealGrid
from focklab.transforms import hermite_signal


@pytest.fixture(scope="session")
def sgrid():
    return RealGrid(8.0, 1.0 / 64)


@pytest.fixture(scope="session")
def tgrid():
    return ComplexGrid(5.0, 0.05)


@pytest.fixture(scope="session")
def ogrid():
    return ComplexGrid(4.0, 0.1)


@pytest.fixture
def signal(sgrid):
    def make(coeffs):
        return hermite_signal(coeffs, sgrid)
    return make


def relerr(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
