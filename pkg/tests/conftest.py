import numpy as np
import pytest

from spinphase import BipartiteDensityMatrix, DensityMatrix


def random_density(rng, twice_spin: int) -> DensityMatrix:
    """Random full-rank state: normalized A A^dag with Gaussian A."""
    n = twice_spin + 1
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a @ a.conj().T
    return DensityMatrix(twice_spin / 2.0, h / np.trace(h))


def random_bipartite_density(rng, ts1: int, ts2: int) -> BipartiteDensityMatrix:
    n = (ts1 + 1) * (ts2 + 1)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a @ a.conj().T
    return BipartiteDensityMatrix(ts1 / 2.0, ts2 / 2.0, h / np.trace(h))


def random_direction(rng) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)
