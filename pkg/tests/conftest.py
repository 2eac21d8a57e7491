import time

import numpy as np
import pytest

from holowave.spectral import Field, Grid

ACCEPTANCE_LINES: dict[int, str] = {}
_START = time.perf_counter()


def random_field(grid, rng, band=None, holomorphic=False, mean=True):
    """Gaussian coefficients on |j| <= band (default n/3)."""
    n = grid.n_points
    band = n // 3 if band is None else band
    j = np.arange(-band, 1 if holomorphic else band + 1)
    if not mean:
        j = j[j != 0]
    c = np.zeros(n, dtype=complex)
    c[j % n] = rng.standard_normal(j.size) + 1j * rng.standard_normal(j.size)
    return Field(grid, c)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def grid64():
    return Grid(64)


@pytest.fixture(scope="session")
def grid128():
    return Grid(128)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
    terminalreporter.write_line(f"suite wall time so far: {time.perf_counter() - _START:.1f} s (budget 300 s)")
