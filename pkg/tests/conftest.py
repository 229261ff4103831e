import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def seeded_triples(seed, n, lo, hi):
    """(x, a, b) triples with x ~ U(0,1) and a, b log-uniform on [lo, hi]."""
    g = np.random.default_rng(seed)
    x = g.uniform(0.0, 1.0, n)
    a = np.exp(g.uniform(np.log(lo), np.log(hi), n))
    b = np.exp(g.uniform(np.log(lo), np.log(hi), n))
    return np.column_stack([x, a, b])
