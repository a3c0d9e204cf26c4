"""Covariance matrices of observable sets and the bipartite block split.

For observables O_i the covariance matrix is

    gamma_ij = <(O_i O_j + O_j O_i)/2> - <O_i><O_j>

and for the composite list {A_k x 1, 1 x B_l} it splits into the local
blocks A, B and the correlation block C_kl = <A_k x B_l> - <A_k><B_l>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, ImaginaryExpectation
from .loo import ObservableSet, expectations
from .states import BipartiteState, partial_trace, purity

RANK_RTOL = 1e-10


@dataclass(frozen=True)
class CovarianceBlocks:
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    C: np.ndarray = field(repr=False)
    meanA: np.ndarray = field(repr=False)
    meanB: np.ndarray = field(repr=False)
    dimA: int = 0
    dimB: int = 0
    purityA: float = float("nan")
    purityB: float = float("nan")

    @property
    def gamma(self) -> np.ndarray:
        return np.block([[self.A, self.C], [self.C.T, self.B]])

    def rotated(self, RA, RB) -> "CovarianceBlocks":
        """Blocks for the LOO sets rotated by RA and RB (no recomputation from the state)."""
        RA, RB = np.asarray(RA), np.asarray(RB)
        return CovarianceBlocks(
            RA @ self.A @ RA.T,
            RB @ self.B @ RB.T,
            RA @ self.C @ RB.T,
            RA @ self.meanA,
            RB @ self.meanB,
            self.dimA,
            self.dimB,
            self.purityA,
            self.purityB,
        )

    def swapped(self) -> "CovarianceBlocks":
        """Same blocks with the roles of A and B exchanged."""
        return CovarianceBlocks(
            self.B, self.A, self.C.T, self.meanB, self.meanA,
            self.dimB, self.dimA, self.purityB, self.purityA,
        )


def _ops(obs):
    return obs.observables if isinstance(obs, ObservableSet) else np.asarray(obs, dtype=complex)


def covariance_matrix(rho, obs) -> np.ndarray:
    """Symmetrized covariance matrix of ``obs`` in state ``rho``."""
    rho = np.asarray(rho)
    ops = _ops(obs)
    if ops.shape[1:] != rho.shape:
        raise DimensionMismatch(f"observables act on {ops.shape[1:]}, state is {rho.shape}")
    mean = expectations(rho, ops)
    # <O_i O_j> for all pairs; the symmetrized part is its Hermitian real part
    second = np.einsum("ab,ibc,jca->ij", rho, ops, ops)
    sym = (second + second.T) / 2
    if np.max(np.abs(sym.imag), initial=0.0) > 1e-9:
        raise ImaginaryExpectation(f"covariance has imaginary residue {np.max(np.abs(sym.imag)):.3e}")
    return sym.real - np.outer(mean, mean)


def correlation_block(state: BipartiteState, looA, looB, meanA=None, meanB=None) -> np.ndarray:
    opsA, opsB = _ops(looA), _ops(looB)
    dA, dB = state.dimA, state.dimB
    if opsA.shape[1] != dA or opsB.shape[1] != dB:
        raise DimensionMismatch(
            f"observables act on ({opsA.shape[1]}, {opsB.shape[1]}), state is ({dA}, {dB})"
        )
    r = state.matrix.reshape(dA, dB, dA, dB)
    # Tr(rho A_k x B_l) = sum rho[a b, a' b'] A_k[a', a] B_l[b', b]
    joint = np.einsum("abcd,kca,ldb->kl", r, opsA, opsB)
    if np.max(np.abs(joint.imag), initial=0.0) > 1e-9:
        raise ImaginaryExpectation(f"correlation has imaginary residue {np.max(np.abs(joint.imag)):.3e}")
    if meanA is None:
        meanA = expectations(partial_trace(state, "A"), opsA)
    if meanB is None:
        meanB = expectations(partial_trace(state, "B"), opsB)
    return joint.real - np.outer(meanA, meanB)


def bipartite_blocks(state: BipartiteState, looA: ObservableSet, looB: ObservableSet) -> CovarianceBlocks:
    """Covariance blocks A, B, C of ``state`` for local sets ``looA``, ``looB``."""
    if looA.dim != state.dimA or looB.dim != state.dimB:
        raise DimensionMismatch(
            f"LOO dims ({looA.dim}, {looB.dim}) do not match state dims ({state.dimA}, {state.dimB})"
        )
    rhoA = partial_trace(state, "A")
    rhoB = partial_trace(state, "B")
    meanA = expectations(rhoA, looA)
    meanB = expectations(rhoB, looB)
    return CovarianceBlocks(
        A=covariance_matrix(rhoA, looA),
        B=covariance_matrix(rhoB, looB),
        C=correlation_block(state, looA, looB, meanA, meanB),
        meanA=meanA,
        meanB=meanB,
        dimA=state.dimA,
        dimB=state.dimB,
        purityA=purity(rhoA),
        purityB=purity(rhoB),
    )


def null_space(M, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal columns spanning the numerical kernel of symmetric ``M``."""
    w, v = np.linalg.eigh(M)
    scale = np.max(np.abs(w), initial=0.0)
    return v[:, np.abs(w) <= rtol * scale] if scale > 0 else v


def kernel_leak(local: np.ndarray, C: np.ndarray, rtol: float = RANK_RTOL) -> float:
    """max ||C^T v|| over unit kernel vectors v of ``local`` (C rows index ``local``)."""
    ns = null_space(local, rtol)
    if ns.shape[1] == 0:
        return 0.0
    return float(np.linalg.norm(C.T @ ns, ord=2))
