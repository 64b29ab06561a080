import time

import numpy as np
import pytest

import exwave as xw
from exwave.data import rough_pair
from exwave.harness import truncation_experiment


@pytest.fixture(scope="session")
def pi_grid():
    return xw.make_grid(np.pi, 64)


@pytest.fixture(scope="session")
def work_grid():
    """Mid-size grid for norm/projection tests."""
    return xw.make_grid(40.0, 4096)


@pytest.fixture(scope="session")
def truncation_scan():
    """The reference truncation scan shared by harness and acceptance tests.

    p = 4, s = 0.96 (threshold 113/120), rough data at amplitude 1 with
    seed 7, J in {3,..,6}, windows from the growth formula, N = 8192.
    Returns (table, elapsed_seconds).
    """
    grid = xw.make_grid(40.0, 8192)
    u0, u1 = rough_pair(grid, 0.96, seed=7, amplitude=1.0)
    cfg = xw.StepperConfig(dt=2e-3, sample_stride=5)
    t0 = time.perf_counter()
    table = truncation_experiment(4.0, 0.96, [3, 4, 5, 6], u0, u1, cfg)
    return table, time.perf_counter() - t0


@pytest.fixture(scope="session")
def truncation_table(truncation_scan):
    return truncation_scan[0]
