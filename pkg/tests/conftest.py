import functools

import numpy as np
import pytest

from ftrfading.model import FtrParams, cdf_exact
from ftrfading.sampler import SampleConfig, sample_ftr


@functools.lru_cache(maxsize=None)
def cached_batch(K, Delta, m, gamma_bar, n, seed):
    return sample_ftr(FtrParams(K, Delta, m, gamma_bar), SampleConfig(seed, n))


@pytest.fixture
def batch_of():
    return cached_batch


def dkw_epsilon(n, alpha=0.01):
    """Half-width of the two-sided DKW band at confidence 1 - alpha."""
    return np.sqrt(np.log(2.0 / alpha) / (2.0 * n))


def ks_upper_bound(samples, cdf, levels=20000):
    """Rigorous upper bound on sup_x |F_n(x) - F(x)| from F evaluated on a grid.

    Between consecutive grid points both functions are non-decreasing, so
    the gap is bracketed by the values at the two ends.
    """
    s = np.sort(np.asarray(samples))
    n = s.size
    grid = np.unique(s[np.linspace(0, n - 1, levels).astype(np.int64)])
    grid = grid[grid > 0]
    f = np.concatenate([[0.0], cdf(grid), [1.0]])
    emp_left = np.concatenate([[0.0], np.searchsorted(s, grid, side="left") / n, [1.0]])
    emp_right = np.concatenate([[0.0], np.searchsorted(s, grid, side="right") / n, [1.0]])
    upper = emp_left[1:] - f[:-1]
    lower = f[1:] - emp_right[:-1]
    return float(max(upper.max(), lower.max()))


def exact_cdf_fn(p):
    return lambda x: np.asarray(cdf_exact(p, x))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
