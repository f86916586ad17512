import numpy as np
import pytest

from cmvscat import CircleGrid, LaurentSeries, ScatteringFunction
from cmvscat.config import RunConfig
from cmvscat.families import random_trig


@pytest.fixture
def grid():
    return CircleGrid(256)


@pytest.fixture
def small_cfg():
    # scaled-down defaults so unit tests stay quick
    return RunConfig(
        grid_size=256,
        levels=6,
        section_start=16,
        section_cap=128,
        cmv_window=64,
        depth=16,
        check_splits=False,
    )


@pytest.fixture
def r_zero(grid):
    return ScatteringFunction.from_coeffs(LaurentSeries(0, [0j]), grid)


@pytest.fixture
def r_half(grid):
    # R = 0.5 tbar, the worked rank-one case
    return ScatteringFunction.from_coeffs(LaurentSeries(-1, [0.5]), grid)


@pytest.fixture
def r_smooth(grid):
    return random_trig(grid, degree=6, margin=0.25, seed=7)


def assert_close(a, b, tol, label=""):
    dev = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
    assert dev <= tol, f"{label}: deviation {dev:.3e} > {tol:.1e}"
