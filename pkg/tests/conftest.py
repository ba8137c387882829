import numpy as np
import pytest


def smooth_lowrank_tensor(shape=(32, 32, 1, 16), rank=2, seed=0):
    """Separable smooth fixture: sum of outer products of low-frequency sinusoids."""
    n1, n2, n3, n4 = shape
    rng = np.random.default_rng(seed)
    x = np.zeros(shape)
    for r in range(rank):
        f1, f2, f4 = rng.integers(1, 3, size=3)
        p1, p2, p4 = rng.uniform(0, 2 * np.pi, size=3)
        u = np.sin(2 * np.pi * f1 * np.arange(n1) / n1 + p1)
        v = np.sin(2 * np.pi * f2 * np.arange(n2) / n2 + p2)
        w = np.sin(2 * np.pi * f4 * np.arange(n4) / n4 + p4)
        x += np.einsum("i,j,k->ijk", u, v, w).reshape(n1, n2, 1, n4)
    lo, hi = x.min(), x.max()
    return (x - lo) / (hi - lo)


@pytest.fixture
def fixture_tensor():
    return smooth_lowrank_tensor()
