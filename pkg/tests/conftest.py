import numpy as np
import pytest

from stiffgas import SgParams, StatePoint, synthesize
from stiffgas.data import grid_values
from stiffgas.fitting import FitWindow

# Published cells used throughout: (25-50 MPa, 300-325 K), (275-300, 300-325), (275-300, 600-625).
CELL_FIRST = SgParams(gamma=1.2424, q=-1.0229e7, p_inf=2.0132e9, c_v=2.6854e4)
CELL_HIGH_P = SgParams(gamma=1.4507, q=-8.2448e6, p_inf=2.6430e9, c_v=1.9077e4)
CELL_LAST = SgParams(gamma=1.6777, q=-2.9442e6, p_inf=1.3432e9, c_v=4.394e3)
IDEAL = SgParams(gamma=1.4, q=0.0, p_inf=0.0, c_v=717.0)


def grid_6x26(p_lo=25e6, T_lo=300.0):
    """Pressures p_lo..p_lo+25 MPa step 5 MPa, temperatures T_lo..T_lo+25 K step 1 K."""
    return grid_values(p_lo, p_lo + 25e6, 5e6), grid_values(T_lo, T_lo + 25.0, 1.0)


def synthetic_window(params, p_lo=25e6, T_lo=300.0, noise=0.0, seed=0):
    ps, Ts = grid_6x26(p_lo, T_lo)
    ds = synthesize(params, ps, Ts, noise=noise, seed=seed)
    return FitWindow(p_lo, p_lo + 25e6, T_lo, T_lo + 25.0, ds.points)


def energy_noise(window, amplitude, seed):
    """Copy of ``window`` with energies scaled by seeded factors in [1-a, 1+a]."""
    rng = np.random.default_rng(seed)
    factors = rng.uniform(1 - amplitude, 1 + amplitude, len(window.points))
    pts = [StatePoint(T=pt.T, p=pt.p, v=pt.v, e=pt.e * f) for pt, f in zip(window.points, factors)]
    return FitWindow(*window.key, pts)


def rel(a, b):
    return abs(a - b) / abs(b)


def random_params(rng):
    return SgParams(gamma=rng.uniform(1.05, 3.0), q=rng.uniform(-2e7, 0.0),
                    p_inf=rng.uniform(0.0, 5e9), c_v=rng.uniform(1e3, 5e4))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
