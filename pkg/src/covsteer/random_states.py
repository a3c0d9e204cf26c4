"""Seeded random states and rotations for property tests and demos."""

from __future__ import annotations

import numpy as np

from .states import BipartiteState, bipartite, make_density


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_pure(d: int, seed=None) -> np.ndarray:
    """Haar-random unit vector in C^d."""
    rng = _rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_density(d: int, seed=None, rank: int | None = None):
    """Random density matrix G G^dagger / Tr from a d x rank Ginibre matrix."""
    rng = _rng(seed)
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    m = g @ g.conj().T
    return make_density(m / np.trace(m).real)


def random_bipartite(dA: int, dB: int, seed=None, rank: int | None = None) -> BipartiteState:
    return bipartite(random_density(dA * dB, seed, rank).entries, dA, dB)


def random_separable(dA: int, dB: int, seed=None, terms: int | None = None) -> BipartiteState:
    """Mixture of up to ``dA*dB`` random product pure states."""
    rng = _rng(seed)
    n = terms if terms is not None else int(rng.integers(1, dA * dB + 1))
    weights = rng.dirichlet(np.ones(n))
    m = np.zeros((dA * dB, dA * dB), dtype=complex)
    for w in weights:
        v = np.kron(random_pure(dA, rng), random_pure(dB, rng))
        m += w * np.outer(v, v.conj())
    return bipartite(m, dA, dB)


def random_orthogonal(n: int, seed=None) -> np.ndarray:
    """Haar-random orthogonal matrix: QR of a Gaussian matrix with the
    diagonal of R made positive."""
    rng = _rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))
