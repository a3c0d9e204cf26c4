"""Steering criteria built on LOO covariance blocks, and witness extraction.

Directions are written ``"A->B"`` (Alice steers Bob; Bob's side is
trusted and carries the uncertainty bound) and ``"B->A"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .covariance import RANK_RTOL, CovarianceBlocks, kernel_leak
from .exceptions import DimensionMismatch, MalformedBlocks, NotAnObservableSet, PartialBobSet
from .loo import ObservableSet, expectation, rotate_loos
from .states import BipartiteState

DECISION_TOL = 1e-9
KERNEL_TOL = 1e-7

AB = "A->B"
BA = "B->A"
_ALIASES = {"ab": AB, "a->b": AB, "a2b": AB, "ba": BA, "b->a": BA, "b2a": BA}


def parse_direction(direction: str) -> str:
    try:
        return _ALIASES[direction.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown direction {direction!r}; use 'ab' or 'ba'") from None


@dataclass(frozen=True)
class SteeringVerdict:
    criterion: str
    direction: str
    lhs: float
    rhs: float
    violated: bool = field(init=False)
    margin: float = field(init=False)
    sense: str = "upper"

    def __post_init__(self):
        # "upper": steerable when lhs exceeds rhs; "lower": when lhs drops below rhs
        margin = self.lhs - self.rhs if self.sense == "upper" else self.rhs - self.lhs
        object.__setattr__(self, "margin", float(margin))
        object.__setattr__(self, "violated", bool(margin > DECISION_TOL))

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "direction": self.direction,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "violated": self.violated,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class WitnessReport:
    direction: str
    setA: ObservableSet = field(repr=False)
    setB: ObservableSet = field(repr=False)
    gain: float
    lurValue: float
    bound: float
    violated: bool
    rotationA: np.ndarray = field(repr=False, default=None)
    rotationB: np.ndarray = field(repr=False, default=None)

    @property
    def margin(self) -> float:
        return self.bound - self.lurValue

    def verdict(self) -> SteeringVerdict:
        return SteeringVerdict("lur-witness", self.direction, self.lurValue, self.bound, sense="lower")


def _oriented(blocks: CovarianceBlocks, direction: str) -> CovarianceBlocks:
    """Blocks arranged so that party A steers party B."""
    return blocks if parse_direction(direction) == AB else blocks.swapped()


def _local_dims(blocks: CovarianceBlocks, dims):
    if dims is not None:
        return dims
    return blocks.dimA, blocks.dimB


def trace_norm(M) -> float:
    return float(np.sum(np.linalg.svd(np.asarray(M), compute_uv=False)))


def lur_bound_loos(d: int) -> float:
    """Minimum of sum_k var(O_k) over states, for a full LOO set in dimension d."""
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    return float(d - 1)


def prop1(blocks: CovarianceBlocks, dims=None, purities=None, direction: str = AB) -> SteeringVerdict:
    """Trace-norm criterion.

    A state non-steerable from A to B obeys
    ``||C||_tr <= sqrt((dA - Tr rhoA^2) (1 - Tr rhoB^2))``; for B->A the
    roles of A and B swap on the right-hand side. ``dims`` and
    ``purities`` default to the values stored on ``blocks``.
    """
    direction = parse_direction(direction)
    dA, dB = _local_dims(blocks, dims)
    pA, pB = purities if purities is not None else (blocks.purityA, blocks.purityB)
    if direction == BA:
        dA, dB, pA, pB = dB, dA, pB, pA
    rhs = np.sqrt(max((dA - pA) * (1 - pB), 0.0))
    return SteeringVerdict("prop1", direction, trace_norm(blocks.C), float(rhs))


def pinv_psd(M, rtol: float = RANK_RTOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a symmetric matrix, relative cutoff ``rtol``."""
    w, v = np.linalg.eigh(M)
    scale = np.max(np.abs(w), initial=0.0)
    keep = np.abs(w) > rtol * scale if scale > 0 else np.zeros_like(w, dtype=bool)
    inv = np.zeros_like(w)
    inv[keep] = 1 / w[keep]
    return (v * inv) @ v.T


def prop2(blocks: CovarianceBlocks, purityOfSteered: float | None = None, direction: str = AB) -> SteeringVerdict:
    """Schur-complement criterion ``Tr(C^T A^+ C) <= 1 - Tr(rho_steered^2)``.

    Raises
    ------
    MalformedBlocks
        If a kernel vector of the steering party's block is not annihilated
        by the correlation block.
    """
    direction = parse_direction(direction)
    o = _oriented(blocks, direction)
    leak = kernel_leak(o.A, o.C)
    if leak > KERNEL_TOL:
        raise MalformedBlocks(f"kernel of the local block leaks into C: ||C^T v|| = {leak:.3e}")
    lhs = float(np.trace(o.C.T @ pinv_psd(o.A) @ o.C))
    p = o.purityB if purityOfSteered is None else purityOfSteered
    return SteeringVerdict("prop2", direction, lhs, float(1 - p))


def _as_stack(obs, d: int) -> np.ndarray:
    ops = obs.observables if isinstance(obs, ObservableSet) else np.asarray(obs, dtype=complex)
    if ops.size == 0:
        return np.zeros((0, d, d), dtype=complex)
    if ops.shape[1:] != (d, d):
        raise DimensionMismatch(f"observables must be {d}x{d}, got {ops.shape[1:]}")
    return ops


def _pad(ops: np.ndarray, n: int) -> np.ndarray:
    d = ops.shape[1]
    return np.concatenate([ops, np.zeros((n - len(ops), d, d), dtype=complex)])


def lur_test(state: BipartiteState, setA, setB, gains=None, direction: str = AB) -> SteeringVerdict:
    """Evaluate sum_k var(g_k A_k x 1 + 1 x B_k) directly on ``state``.

    Variances are computed from raw moments of the joint operators, not
    from covariance blocks. The steered party's list must be a full LOO
    set so that the bound ``d - 1`` applies; the other list may be partial
    and is padded with zero operators. ``gains`` multiply the steering
    party's observables (default 1).

    Raises
    ------
    PartialBobSet
        If the steered party's list is not a full LOO set.
    """
    direction = parse_direction(direction)
    opsA = _as_stack(setA, state.dimA)
    opsB = _as_stack(setB, state.dimB)
    steered, dS = (opsB, state.dimB) if direction == AB else (opsA, state.dimA)
    if not isinstance(setB if direction == AB else setA, ObservableSet):
        try:
            ObservableSet(steered)
        except NotAnObservableSet as exc:
            raise PartialBobSet(f"steered party needs a full LOO set: {exc}") from exc
    n = max(len(opsA), len(opsB))
    opsA, opsB = _pad(opsA, n), _pad(opsB, n)
    g = np.ones(n) if gains is None else np.broadcast_to(np.asarray(gains, dtype=float), (n,))

    rho = state.matrix
    idA, idB = np.eye(state.dimA), np.eye(state.dimB)
    total = 0.0
    for k in range(n):
        if direction == AB:
            op = g[k] * np.kron(opsA[k], idB) + np.kron(idA, opsB[k])
        else:
            op = np.kron(opsA[k], idB) + g[k] * np.kron(idA, opsB[k])
        total += expectation(rho, op @ op) - expectation(rho, op) ** 2
    return SteeringVerdict("lur-witness", direction, float(total), lur_bound_loos(dS), sense="lower")


def optimal_gain(trace_steering: float, correlation_sum: float) -> float:
    """Uniform gain minimising g^2 T + 2 g S: g = -S / T (0 when T vanishes)."""
    if trace_steering <= 0:
        return 0.0
    return -correlation_sum / trace_steering


def extract_witness(blocks: CovarianceBlocks, looA: ObservableSet, looB: ObservableSet,
                    direction: str = AB) -> WitnessReport:
    """Rotate both LOO sets onto the singular vectors of C and pick the best uniform gain.

    With ``C = U diag(s) V^T`` the new sets are ``A'_k = sum_i U[i, k] A_i``
    and ``B'_k = sum_i V[i, k] B_i``; their correlation block is diagonal
    with entries ``s``, so the paired correlation sum equals ``||C||_tr``.
    The report carries the block-form value
    ``g^2 Tr(A) + Tr(B) + 2 g ||C||_tr``, checked against ``d_steered - 1``.
    """
    direction = parse_direction(direction)
    U, s, Vt = np.linalg.svd(blocks.C, full_matrices=True)
    RA, RB = U.T, Vt
    setA, setB = rotate_loos(looA, RA), rotate_loos(looB, RB)
    tn = float(np.sum(s))
    trA, trB = float(np.trace(blocks.A)), float(np.trace(blocks.B))
    if direction == AB:
        t_steer, t_steered, bound = trA, trB, lur_bound_loos(blocks.dimB)
    else:
        t_steer, t_steered, bound = trB, trA, lur_bound_loos(blocks.dimA)
    g = optimal_gain(t_steer, tn)
    value = g * g * t_steer + t_steered + 2 * g * tn
    return WitnessReport(
        direction=direction,
        setA=setA,
        setB=setB,
        gain=float(g),
        lurValue=float(value),
        bound=bound,
        violated=bool(bound - value > DECISION_TOL),
        rotationA=RA,
        rotationB=RB,
    )
