import numpy as np
import pytest

from covsteer.analysis import threshold_scan
from covsteer.covariance import CovarianceBlocks, bipartite_blocks
from covsteer.criteria import (
    AB,
    BA,
    SteeringVerdict,
    extract_witness,
    lur_bound_loos,
    lur_test,
    parse_direction,
    pinv_psd,
    prop1,
    prop2,
    trace_norm,
)
from covsteer.exceptions import MalformedBlocks, PartialBobSet
from covsteer.loo import ObservableSet, expectations, gell_mann_loos, pauli_loos
from covsteer.random_states import random_bipartite, random_density, random_orthogonal, random_pure
from covsteer.states import bipartite, family_state, partial_trace, purity


def canonical_blocks(state):
    return bipartite_blocks(state, gell_mann_loos(state.dimA), gell_mann_loos(state.dimB))


def test_parse_direction():
    assert parse_direction("ab") == AB
    assert parse_direction("B->A") == BA
    with pytest.raises(ValueError):
        parse_direction("sideways")


def test_verdict_margin_and_flag():
    v = SteeringVerdict("prop1", AB, 1.0, 0.5)
    assert v.margin == 0.5 and v.violated
    assert not SteeringVerdict("prop1", AB, 0.5 + 1e-10, 0.5).violated
    assert SteeringVerdict("lur-witness", AB, 0.2, 1.0, sense="lower").margin == pytest.approx(0.8)


def test_prop1_singlet():
    v = prop1(canonical_blocks(family_state("werner-2", 1.0)), direction="ab")
    assert v.lhs == pytest.approx(1.5, abs=1e-12)
    assert v.rhs == pytest.approx(np.sqrt(3) / 2, abs=1e-12)
    assert v.violated


def test_prop1_explicit_dims_and_purities():
    b = canonical_blocks(family_state("werner-2", 1.0))
    v = prop1(b, dims=(2, 2), purities=(0.5, 0.5), direction=AB)
    assert v.rhs == pytest.approx(np.sqrt(1.5 * 0.5))


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 3)])
def test_product_states_never_flagged(dims):
    dA, dB = dims
    s = bipartite(np.kron(random_density(dA, seed=3).entries, random_density(dB, seed=4).entries), dA, dB)
    b = canonical_blocks(s)
    for d in (AB, BA):
        for v in (prop1(b, direction=d), prop2(b, direction=d)):
            assert v.lhs == pytest.approx(0, abs=1e-10)
            assert not v.violated
        w = extract_witness(b, gell_mann_loos(dA), gell_mann_loos(dB), d)
        assert w.gain == pytest.approx(0, abs=1e-10)
        assert not w.violated


@pytest.mark.parametrize("p", np.linspace(0, 1, 11))
def test_prop2_werner_closed_form(p):
    b = canonical_blocks(family_state("werner-2", p))
    for d in (AB, BA):
        v = prop2(b, direction=d)
        assert v.lhs == pytest.approx(1.5 * p * p, abs=1e-12)
        assert v.rhs == pytest.approx(0.5, abs=1e-12)


def test_prop2_margin_increasing_on_werner():
    ps = np.linspace(0, 1, 25)
    margins = [prop2(canonical_blocks(family_state("werner-2", p))).margin for p in ps]
    assert np.all(np.diff(margins) > 0)
    np.testing.assert_allclose(margins, 1.5 * ps**2 - 0.5, atol=1e-12)


def test_prop2_rejects_malformed_blocks():
    A = np.diag([0.0, 1.0])
    C = np.array([[0.3, 0.0], [0.0, 0.1]])
    blocks = CovarianceBlocks(A, np.eye(2), C, np.zeros(2), np.zeros(2), 2, 2, 0.5, 0.5)
    with pytest.raises(MalformedBlocks):
        prop2(blocks, direction=AB)


def test_pinv_cutoff_handles_zero_matrix():
    np.testing.assert_array_equal(pinv_psd(np.zeros((3, 3))), np.zeros((3, 3)))
    M = np.diag([2.0, 1e-13, 0.0])
    np.testing.assert_allclose(pinv_psd(M), np.diag([0.5, 0, 0]))


def test_lur_bound_values():
    assert lur_bound_loos(2) == 1
    assert lur_bound_loos(3) == 2
    with pytest.raises(ValueError):
        lur_bound_loos(1)


@pytest.mark.parametrize("d", [2, 3])
def test_lur_bound_by_sampling(d):
    loos = gell_mann_loos(d)
    rng = np.random.default_rng(d)
    sq = np.einsum("kij,kjl->il", loos.observables, loos.observables)
    values = []
    for _ in range(2000):
        v = random_pure(d, rng)
        rho = np.outer(v, v.conj())
        values.append(np.trace(rho @ sq).real - np.sum(expectations(rho, loos) ** 2))
    assert min(values) >= d - 1 - 1e-9
    assert min(values) == pytest.approx(d - 1, abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_lur_test_zero_gain_is_local_variance(seed):
    s = random_bipartite(2, 3, seed=seed)
    v = lur_test(s, gell_mann_loos(2), gell_mann_loos(3), gains=0.0)
    assert v.lhs == pytest.approx(3 - purity(partial_trace(s, "B")), abs=1e-10)
    assert v.rhs == 2
    assert not v.violated


def test_lur_test_singlet_pauli_witness():
    s = family_state("werner-2", 1.0)
    paulis = pauli_loos()
    flipped = ObservableSet(-paulis.observables)
    v = lur_test(s, flipped, paulis, gains=-1.0)
    assert v.lhs == pytest.approx(0, abs=1e-12)
    assert v.violated
    # the same operators with unit gain on the unflipped set
    assert lur_test(s, paulis, paulis).lhs == pytest.approx(0, abs=1e-12)


def test_lur_test_rejects_partial_steered_set():
    s = family_state("werner-2", 1.0)
    three = pauli_loos().observables[1:]
    with pytest.raises(PartialBobSet):
        lur_test(s, pauli_loos(), three)
    with pytest.raises(PartialBobSet):
        lur_test(s, three, pauli_loos(), direction=BA)


def test_lur_test_partial_steering_set_is_padded():
    s = family_state("werner-2", 1.0)
    three = pauli_loos().observables[1:]
    # sigma_k/sqrt2 x 1 + 1 x sigma_k/sqrt2 kills the singlet; the unpaired 1/sqrt2 has zero variance
    v = lur_test(s, three, pauli_loos().observables[[1, 2, 3, 0]])
    assert v.lhs == pytest.approx(0, abs=1e-12)


def test_extract_witness_singlet():
    b = canonical_blocks(family_state("werner-2", 1.0))
    w = extract_witness(b, gell_mann_loos(2), gell_mann_loos(2))
    assert w.gain == pytest.approx(-1, abs=1e-12)
    assert w.lurValue == pytest.approx(0, abs=1e-12)
    assert w.bound == 1
    assert w.violated
    assert isinstance(w.setA, ObservableSet) and isinstance(w.setB, ObservableSet)


def test_werner_half_not_detected_by_witness():
    s = family_state("werner-2", 0.5)
    b = canonical_blocks(s)
    w = extract_witness(b, gell_mann_loos(2), gell_mann_loos(2))
    assert not w.violated
    assert lur_test(s, w.setA, w.setB, w.gain).lhs == pytest.approx(w.lurValue, abs=1e-10)


def test_rotated_correlation_is_diagonal():
    s = random_bipartite(3, 3, seed=5)
    b = canonical_blocks(s)
    w = extract_witness(b, gell_mann_loos(3), gell_mann_loos(3))
    Ct = bipartite_blocks(s, w.setA, w.setB).C
    np.testing.assert_allclose(Ct, np.diag(np.linalg.svd(b.C, compute_uv=False)), atol=1e-10)
    assert np.trace(Ct) == pytest.approx(trace_norm(b.C), abs=1e-10)


CASES = [
    ("werner-2", 0.9),
    ("noisy-singlet", 0.8),
    ("isotropic-qutrit-F", 0.7),
    ("two-qutrit-Fprime", 0.9),
    ("werner-2", 0.3),
]


@pytest.mark.parametrize("family, x", CASES)
@pytest.mark.parametrize("direction", [AB, BA])
def test_witness_equivalence_on_families(family, x, direction):
    s = family_state(family, x)
    b = canonical_blocks(s)
    w = extract_witness(b, gell_mann_loos(s.dimA), gell_mann_loos(s.dimB), direction)
    assert w.violated == prop1(b, direction=direction).violated
    direct = lur_test(s, w.setA, w.setB, w.gain, direction)
    assert direct.lhs == pytest.approx(w.lurValue, abs=1e-8)


@pytest.mark.parametrize("direction", [AB, BA])
def test_witness_unequal_dims(direction):
    # qubit-qutrit state close to a maximally correlated pure state
    v = np.zeros(6, dtype=complex)
    v[0] = v[4] = 1 / np.sqrt(2)
    s = bipartite(0.95 * np.outer(v, v.conj()) + 0.05 * np.eye(6) / 6, 2, 3)
    b = canonical_blocks(s)
    w = extract_witness(b, gell_mann_loos(2), gell_mann_loos(3), direction)
    assert w.violated == prop1(b, direction=direction).violated
    assert lur_test(s, w.setA, w.setB, w.gain, direction).lhs == pytest.approx(w.lurValue, abs=1e-8)


@pytest.mark.parametrize("seed", range(5))
def test_basis_invariance(seed):
    s = random_bipartite(3, 3, seed=seed, rank=2)
    b = canonical_blocks(s)
    rb = b.rotated(random_orthogonal(9, seed), random_orthogonal(9, seed + 50))
    for d in (AB, BA):
        assert prop1(rb, direction=d).margin == pytest.approx(prop1(b, direction=d).margin, abs=1e-8)
        assert prop2(rb, direction=d).margin == pytest.approx(prop2(b, direction=d).margin, abs=1e-8)


def test_noisy_singlet_direction_asymmetry():
    # computed thresholds: B->A near 0.5375, A->B near 0.5818
    b = canonical_blocks(family_state("noisy-singlet", 0.56))
    assert prop1(b, direction=BA).violated
    assert not prop1(b, direction=AB).violated


def test_noisy_singlet_prop1_thresholds_by_root_finding():
    from scipy.optimize import brentq

    def margin(p, d):
        return prop1(canonical_blocks(family_state("noisy-singlet", p)), direction=d).margin

    ab = brentq(margin, 0.4, 1.0, args=(AB,), xtol=1e-12)
    ba = brentq(margin, 0.4, 1.0, args=(BA,), xtol=1e-12)
    assert threshold_scan("noisy-singlet", "prop1", AB) == pytest.approx(ab, abs=2e-6)
    assert threshold_scan("noisy-singlet", "prop1", BA) == pytest.approx(ba, abs=2e-6)
    assert ba < ab


@pytest.mark.parametrize("dims", [(2, 2), (3, 3)])
def test_separable_states_pass(dims):
    from covsteer.random_states import random_separable

    rng = np.random.default_rng(99)
    for _ in range(30):
        s = random_separable(*dims, seed=rng)
        b = canonical_blocks(s)
        for d in (AB, BA):
            assert not prop1(b, direction=d).violated
            assert not prop2(b, direction=d).violated
