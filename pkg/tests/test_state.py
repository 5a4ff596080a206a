import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ginibre_density
from pixent.state import (
    BasisPair,
    BasisSpec,
    CountMatrix,
    TwoQuditState,
    apply_isotropic_noise,
    counts_to_probs,
    maximally_mixed,
    outcome_probabilities,
    phi_plus,
    pure_state_from_amplitudes,
    simulate_counts,
)

PRIMES = [3, 5, 7, 11, 13, 17, 19]


def test_basis_spec_parse():
    assert BasisSpec.parse("std") == BasisSpec("standard")
    assert BasisSpec.parse("wf:3") == BasisSpec("wf", 3)
    assert BasisSpec.parse("WF:k=3", conjugate=True) == BasisSpec("wf", 3, True)
    assert BasisSpec("wf", 4).label == "wf:k=4"
    with pytest.raises(ValueError):
        BasisSpec.parse("fourier")
    with pytest.raises(ValueError):
        BasisSpec("wf", 5).matrix(5)
    pair = BasisPair.matched("wf:2")
    assert not pair.a.conjugate and pair.b.conjugate and pair.label == "wf:k=2"


def test_pure_state_from_identity():
    s = pure_state_from_amplitudes(np.eye(5) / np.sqrt(5))
    assert s.fidelity_phi_plus() == pytest.approx(1.0)


def test_pure_state_diagonal_schmidt():
    amp = np.diag([3.0, 2.0, 1.0])
    s = pure_state_from_amplitudes(amp)
    sv = np.linalg.svd(s.vector.reshape(3, 3), compute_uv=False)
    assert np.allclose(sv, np.array([3, 2, 1]) / np.sqrt(14))
    with pytest.raises(ValueError):
        pure_state_from_amplitudes(np.zeros((3, 3)))


def test_state_validation():
    with pytest.raises(ValueError):
        TwoQuditState(2, vector=np.ones(4))
    with pytest.raises(ValueError):
        TwoQuditState(2)
    with pytest.raises(ValueError):
        TwoQuditState(2, matrix=np.diag([1.0, 0, 0, 0.5]))
    with pytest.raises(MemoryError):
        phi_plus(37).density_matrix()


def test_isotropic_noise_examples():
    s = phi_plus(5)
    assert apply_isotropic_noise(s, 0.0).fidelity_phi_plus() == pytest.approx(1.0)
    mixed = apply_isotropic_noise(s, 1.0)
    assert np.allclose(mixed.density_matrix(), np.eye(25) / 25)
    for p in (0.1, 0.37, 0.8):
        f = apply_isotropic_noise(s, p).fidelity_phi_plus()
        assert f == pytest.approx((1 - p) * 1.0 + p / 25)
    with pytest.raises(ValueError):
        apply_isotropic_noise(s, 1.2)


def test_noise_accumulates_on_pure_states():
    s = apply_isotropic_noise(apply_isotropic_noise(phi_plus(3), 0.5), 0.5)
    assert s.noise == pytest.approx(0.75)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_noise_keeps_density_physical(d, p, seed):
    rho = ginibre_density(d, np.random.default_rng(seed))
    out = apply_isotropic_noise(TwoQuditState(d, matrix=rho), p).density_matrix()
    assert np.allclose(out, out.conj().T, atol=1e-12)
    assert np.trace(out).real == pytest.approx(1.0)
    assert np.min(np.linalg.eigvalsh(out)) > -1e-12


@pytest.mark.parametrize("d", PRIMES)
def test_phi_plus_in_conjugated_wf_pairs_is_diagonal(d):
    for k in range(d):
        pair = BasisPair.matched(f"wf:{k}")
        assert np.allclose(outcome_probabilities(phi_plus(d), pair.a, pair.b), np.eye(d) / d, atol=1e-9)


def test_conjugation_flag_matters():
    probs = outcome_probabilities(phi_plus(5), BasisSpec("wf", 1), BasisSpec("wf", 1))
    assert np.max(np.abs(probs - np.eye(5) / 5)) > 0.03
    off = probs.sum() - np.trace(probs)
    assert off > 0.5


def test_maximally_mixed_is_uniform():
    pair = BasisPair.matched("wf:2")
    assert np.allclose(outcome_probabilities(maximally_mixed(5), pair.a, pair.b), 1 / 25)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(0, 2**32 - 1), st.sampled_from(["std", "wf:0", "wf:1", "wf:2"]))
def test_pure_and_dense_routes_agree(d, seed, label):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d * d) + 1j * rng.normal(size=d * d)
    v /= np.linalg.norm(v)
    pure = TwoQuditState(d, vector=v)
    dense = TwoQuditState(d, matrix=np.outer(v, v.conj()))
    pair = BasisPair.matched(label)
    a = outcome_probabilities(pure, pair.a, pair.b)
    b = outcome_probabilities(dense, pair.a, pair.b)
    assert np.allclose(a, b, atol=1e-12)
    assert a.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.all(a >= -1e-12)


def test_simulate_counts_zero_flux_and_determinism():
    probs = np.full((3, 3), 1 / 9)
    assert simulate_counts(probs, 0, seed=1).total == 0
    a = simulate_counts(probs, 1e4, seed=7)
    b = simulate_counts(probs, 1e4, seed=7)
    assert np.array_equal(a.counts, b.counts)
    assert not np.array_equal(a.counts, simulate_counts(probs, 1e4, seed=8).counts)
    with pytest.raises(ValueError):
        simulate_counts(probs, -1, seed=1)


def test_simulate_counts_expectation():
    rng = np.random.default_rng(11)
    probs = rng.dirichlet(np.ones(9)).reshape(3, 3)
    n, seeds = 50, 10_000
    mean = np.mean([simulate_counts(probs, n, seed=s).counts for s in range(seeds)], axis=0) / n
    sigma = np.sqrt(probs / n / seeds)
    assert np.all(np.abs(mean - probs) < 3 * sigma + 1e-12)


def test_law_of_large_numbers():
    # light noise: entries >= 0.01 hold ~2e5 counts, so 1% is a > 4 sigma band
    pair = BasisPair.matched("wf:1")
    probs = outcome_probabilities(apply_isotropic_noise(phi_plus(5), 0.05), pair.a, pair.b)
    est = counts_to_probs(simulate_counts(probs, 1e6, seed=3))
    big = probs >= 0.01
    assert np.all(np.abs(est[big] / probs[big] - 1) < 0.01)


def test_counts_to_probs_examples():
    assert np.allclose(counts_to_probs(np.ones((4, 4))), 1 / 16)
    assert np.allclose(counts_to_probs(7 * np.eye(3)), np.eye(3) / 3)
    assert np.allclose(counts_to_probs(np.array([[3, 1], [1, 3]])), [[0.375, 0.125], [0.125, 0.375]])
    with pytest.raises(ValueError):
        counts_to_probs(np.zeros((2, 2)))


def test_count_matrix_validation():
    pair = BasisPair.matched("std")
    with pytest.raises(ValueError):
        CountMatrix(3, pair, np.ones((2, 2)))
    with pytest.raises(ValueError):
        CountMatrix(2, pair, -np.ones((2, 2)))
