"""Random matrices shared by the test modules."""

import numpy as np
from scipy.stats import unitary_group


def random_unitary(rng, dim):
    return unitary_group.rvs(dim, random_state=rng)


def random_hermitian(rng, dim, scale=1.0):
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (x + x.conj().T) / 2


def random_density(rng, dim, rank=None):
    """Density matrix with a random spectrum of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    w = np.zeros(dim)
    w[:rank] = rng.dirichlet(np.ones(rank))
    u = random_unitary(rng, dim)
    return (u * w) @ u.conj().T


def random_pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)
