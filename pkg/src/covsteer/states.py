"""Density matrices, bipartite states and the built-in one-parameter families.

Bipartite matrices use A-major tensor ordering: the row/column index of
``|a>|b>`` is ``a * dimB + b``, which is what ``np.kron(rho_A, rho_B)``
produces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .exceptions import (
    DimensionMismatch,
    InvalidParameter,
    NonHermitian,
    NonUnitTrace,
    NotPositive,
    ParseError,
)

TOL = 1e-9

Party = Literal["A", "B"]

FAMILIES = ("noisy-singlet", "isotropic-qutrit-F", "werner-2", "two-qutrit-Fprime", "explicit")


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix. Build it with :func:`make_density`."""

    entries: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


@dataclass(frozen=True)
class BipartiteState:
    dimA: int
    dimB: int
    joint: DensityMatrix

    def __post_init__(self):
        if self.dimA * self.dimB != self.joint.dim:
            raise DimensionMismatch(
                f"dimA*dimB = {self.dimA * self.dimB} but joint state has dim {self.joint.dim}"
            )

    @property
    def matrix(self) -> np.ndarray:
        return self.joint.entries


@dataclass(frozen=True)
class FamilySpec:
    family: str
    parameter: float = 0.0
    matrix: np.ndarray | None = field(default=None, repr=False)
    dims: tuple[int, int] | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameter(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "explicit":
            if self.matrix is None or self.dims is None:
                raise InvalidParameter("explicit family needs a matrix and dims")
        elif not 0.0 <= self.parameter <= 1.0:
            raise InvalidParameter(f"parameter {self.parameter} outside [0, 1] for {self.family}")


def make_density(entries, *, tol: float = TOL) -> DensityMatrix:
    """Validate ``entries`` as a density matrix.

    The input is checked for Hermiticity, then replaced by ``(M + M^dagger)/2``
    before the trace and eigenvalue checks so that rounding noise cannot
    trigger a spurious failure.

    Raises
    ------
    NonHermitian, NonUnitTrace, NotPositive
        With the measured deviation in the message.
    """
    m = np.array(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    herm_dev = np.max(np.abs(m - m.conj().T))
    if herm_dev > tol:
        raise NonHermitian(f"Hermiticity violated: max |M - M^dagger| = {herm_dev:.3e}")
    m = (m + m.conj().T) / 2
    tr = np.trace(m).real
    if abs(tr - 1) > tol:
        raise NonUnitTrace(f"unit trace violated: |Tr - 1| = {abs(tr - 1):.3e}")
    lmin = np.linalg.eigvalsh(m)[0]
    if lmin < -tol:
        raise NotPositive(f"positivity violated: min eigenvalue = {lmin:.3e}")
    m.setflags(write=False)
    return DensityMatrix(m)


def bipartite(entries, dimA: int, dimB: int) -> BipartiteState:
    return BipartiteState(dimA, dimB, make_density(entries))


def ket(dims, *indices) -> np.ndarray:
    """Computational basis vector ``|i_1 i_2 ...>`` on a product space."""
    if isinstance(dims, int):
        dims = (dims,) * len(indices)
    v = np.zeros(int(np.prod(dims)), dtype=complex)
    v[np.ravel_multi_index(indices, dims)] = 1.0
    return v


def projector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def singlet() -> np.ndarray:
    """|psi^-> = (|01> - |10>)/sqrt(2)."""
    return (ket(2, 0, 1) - ket(2, 1, 0)) / np.sqrt(2)


def max_entangled(d: int) -> np.ndarray:
    """|Phi^+> = sum_j |jj> / sqrt(d)."""
    return sum(ket(d, j, j) for j in range(d)) / np.sqrt(d)


def _shift_mixture(shift: int) -> np.ndarray:
    # (1/3) sum_j |j, j+shift mod 3><j, j+shift mod 3|
    return sum(projector(ket(3, j, (j + shift) % 3)) for j in range(3)) / 3


def noisy_singlet(p: float) -> np.ndarray:
    rho_s = 2 / 3 * projector(ket(2, 0, 0)) + 1 / 3 * projector(ket(2, 0, 1))
    return p * projector(singlet()) + (1 - p) * rho_s


def isotropic_qutrit_F(F: float) -> np.ndarray:
    return F * projector(max_entangled(3)) + (1 - F) * _shift_mixture(1)


def werner_2(p: float) -> np.ndarray:
    return p * projector(singlet()) + (1 - p) / 4 * np.eye(4)


def two_qutrit_Fprime(F: float) -> np.ndarray:
    return F * projector(max_entangled(3)) + (1 - F) / 2 * (_shift_mixture(1) + _shift_mixture(2))


_BUILDERS = {
    "noisy-singlet": (noisy_singlet, 2),
    "isotropic-qutrit-F": (isotropic_qutrit_F, 3),
    "werner-2": (werner_2, 2),
    "two-qutrit-Fprime": (two_qutrit_Fprime, 3),
}


def family_state(spec: FamilySpec | str, parameter: float | None = None) -> BipartiteState:
    """Build a state from one of the built-in families.

    ``family_state("werner-2", 0.8)`` is shorthand for
    ``family_state(FamilySpec("werner-2", 0.8))``.
    """
    if isinstance(spec, str):
        spec = FamilySpec(spec, 0.0 if parameter is None else float(parameter))
    if spec.family == "explicit":
        dA, dB = spec.dims
        return bipartite(spec.matrix, dA, dB)
    build, d = _BUILDERS[spec.family]
    return bipartite(build(spec.parameter), d, d)


def family_dims(family: str) -> tuple[int, int]:
    d = _BUILDERS[family][1]
    return d, d


def partial_trace(state: BipartiteState, keep: Party) -> DensityMatrix:
    """Reduced state of the party ``keep`` ("A" or "B")."""
    r = state.matrix.reshape(state.dimA, state.dimB, state.dimA, state.dimB)
    if keep == "A":
        red = np.einsum("ijkj->ik", r)
    elif keep == "B":
        red = np.einsum("ijil->jl", r)
    else:
        raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")
    return make_density(red)


def purity(rho) -> float:
    """Tr(rho^2)."""
    m = np.asarray(rho)
    # Tr(rho rho) = sum_ij |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def state_from_json(doc: dict) -> BipartiteState:
    """Parse ``{"dimA": n, "dimB": m, "re": [[...]], "im": [[...]]}``.

    ``im`` may be omitted for real states.
    """
    try:
        dA, dB = int(doc["dimA"]), int(doc["dimB"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc.get("im", np.zeros_like(re)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed state document: {exc}") from exc
    n = dA * dB
    if re.shape != (n, n) or im.shape != (n, n):
        raise ParseError(f"state matrix must be {n}x{n}, got re {re.shape}, im {im.shape}")
    return bipartite(re + 1j * im, dA, dB)


def state_to_json(state: BipartiteState) -> dict:
    m = state.matrix
    return {"dimA": state.dimA, "dimB": state.dimB, "re": m.real.tolist(), "im": m.imag.tolist()}


def load_state(path: str | Path) -> BipartiteState:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return state_from_json(doc)
