"""Local orthogonal observables (LOOs).

A LOO set on a d-dimensional space is a list of d**2 Hermitian matrices
with Tr(O_k O_l) = delta_kl. Any two LOO sets are related by a real
orthogonal d**2 x d**2 matrix, which is how :func:`rotate_loos` works.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, ImaginaryExpectation, NonOrthogonalRotation, NotAnObservableSet

TOL = 1e-9


@dataclass(frozen=True)
class ObservableSet:
    """An ordered stack of LOOs, shape ``(dim**2, dim, dim)``."""

    observables: np.ndarray = field(repr=False)

    def __post_init__(self):
        ops = np.asarray(self.observables, dtype=complex)
        n, d, d2 = ops.shape
        if d != d2 or n != d * d:
            raise NotAnObservableSet(f"need {d * d} matrices of size {d}x{d}, got shape {ops.shape}")
        herm = np.max(np.abs(ops - ops.conj().transpose(0, 2, 1)))
        if herm > TOL:
            raise NotAnObservableSet(f"Hermiticity violated by {herm:.3e}")
        gram = hs_gram(ops)
        dev = np.max(np.abs(gram - np.eye(n)))
        if dev > TOL:
            raise NotAnObservableSet(f"Hilbert-Schmidt orthonormality violated by {dev:.3e}")
        comp = np.max(np.abs(np.einsum("kij,kjl->il", ops, ops) - d * np.eye(d)))
        if comp > 1e-8:
            raise NotAnObservableSet(f"completeness sum O_k^2 = d*1 violated by {comp:.3e}")
        ops.setflags(write=False)
        object.__setattr__(self, "observables", ops)

    @property
    def dim(self) -> int:
        return self.observables.shape[1]

    def __len__(self):
        return self.observables.shape[0]

    def __getitem__(self, k):
        return self.observables[k]

    def __iter__(self):
        return iter(self.observables)


def hs_gram(ops: np.ndarray) -> np.ndarray:
    """Matrix of Hilbert-Schmidt inner products Tr(O_k O_l) (real part)."""
    return np.einsum("kij,lji->kl", ops, ops).real


def gell_mann_loos(d: int) -> ObservableSet:
    """Canonical LOO set in dimension ``d``.

    Order: the d diagonal projectors |j><j|, then the symmetric
    (|j><k| + |k><j|)/sqrt(2) for j < k, then the antisymmetric
    (-i|j><k| + i|k><j|)/sqrt(2) for j < k.
    """
    if d < 2:
        raise ValueError(f"LOO sets need d >= 2, got {d}")
    ops = np.zeros((d * d, d, d), dtype=complex)
    n = 0
    for j in range(d):
        ops[n, j, j] = 1.0
        n += 1
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    s = 1 / np.sqrt(2)
    for j, k in pairs:
        ops[n, j, k] = ops[n, k, j] = s
        n += 1
    for j, k in pairs:
        ops[n, j, k] = -1j * s
        ops[n, k, j] = 1j * s
        n += 1
    return ObservableSet(ops)


def pauli_loos() -> ObservableSet:
    """{1, sigma_x, sigma_y, sigma_z} / sqrt(2)."""
    ops = np.array(
        [
            [[1, 0], [0, 1]],
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=complex,
    )
    return ObservableSet(ops / np.sqrt(2))


def rotate_loos(loos: ObservableSet, R) -> ObservableSet:
    """Return the set ``O'_l = sum_k R[l, k] O_k``."""
    R = np.asarray(R, dtype=float)
    n = len(loos)
    if R.shape != (n, n):
        raise DimensionMismatch(f"rotation must be {n}x{n}, got {R.shape}")
    dev = np.max(np.abs(R @ R.T - np.eye(n)))
    if dev > TOL:
        raise NonOrthogonalRotation(f"R R^T deviates from identity by {dev:.3e}")
    return ObservableSet(np.einsum("lk,kij->lij", R, loos.observables))


def rotation_between(src: ObservableSet, dst: ObservableSet) -> np.ndarray:
    """The orthogonal R with ``rotate_loos(src, R) == dst``: R[l, k] = Tr(dst_l src_k)."""
    return np.einsum("lij,kji->lk", dst.observables, src.observables).real


def expectation(rho, O) -> float:
    """Tr(rho O) for Hermitian O; raises if the imaginary part exceeds 1e-8."""
    rho = np.asarray(rho)
    O = np.asarray(O)
    if rho.shape != O.shape:
        raise DimensionMismatch(f"state {rho.shape} and observable {O.shape} differ")
    val = np.einsum("ij,ji->", rho, O)
    if abs(val.imag) > 1e-8:
        raise ImaginaryExpectation(f"Tr(rho O) has imaginary part {val.imag:.3e}")
    return float(val.real)


def expectations(rho, loos) -> np.ndarray:
    """Vector of Tr(rho O_k) over a stack of observables."""
    ops = loos.observables if isinstance(loos, ObservableSet) else np.asarray(loos)
    vals = np.einsum("ij,kji->k", np.asarray(rho), ops)
    if np.max(np.abs(vals.imag), initial=0.0) > 1e-8:
        raise ImaginaryExpectation(f"imaginary expectation {np.max(np.abs(vals.imag)):.3e}")
    return vals.real
