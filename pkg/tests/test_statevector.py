import numpy as np
import pytest

from model import DegenerateParameterError, DimensionMismatchError, ProductParams, PureState, RngStream
from quantum.statevector import (
    apply_product_unitary_dagger,
    basis_bits,
    fidelity_exact,
    haar_random_state,
    probabilities,
    product_state_vector,
    qubit_count,
    sample_shots,
    unitary_from_params,
)


def test_basis_bits_are_little_endian():
    assert basis_bits(2).tolist() == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_qubit_count():
    assert qubit_count(8) == 3
    with pytest.raises(DimensionMismatchError):
        qubit_count(6)


def test_unitary_from_params_is_unitary():
    u = unitary_from_params(1.0 + 2.0j, -0.5 + 0.1j)
    assert u @ u.conj().T == pytest.approx(np.eye(2))
    assert np.linalg.norm(u[:, 0]) == pytest.approx(1.0)


def test_unitary_from_params_rejects_zero_vector():
    with pytest.raises(DegenerateParameterError):
        unitary_from_params(0.0, 0.0)


def test_product_state_vector_bit_order():
    # 큐비트 0 만 |1⟩ -> 기저 인덱스 1
    params = ProductParams([[0.0, 1.0], [1.0, 0.0]])
    vector = product_state_vector(params)
    assert np.abs(vector) == pytest.approx([0.0, 1.0, 0.0, 0.0])


def test_identity_params_leave_state_unchanged(rng):
    state = haar_random_state(3, rng)
    rotated = apply_product_unitary_dagger(state, ProductParams.identity(3))
    assert rotated.amplitudes == pytest.approx(state.amplitudes)


def test_dagger_maps_matching_product_state_to_zero_string(rng):
    params = ProductParams.random(4, rng)
    target = PureState.normalized(product_state_vector(params))
    rotated = apply_product_unitary_dagger(target, params)
    assert abs(rotated.amplitudes[0]) == pytest.approx(1.0)
    assert fidelity_exact(target, params) == pytest.approx(1.0)


def test_fidelity_matches_rotated_zero_amplitude(rng):
    target = haar_random_state(3, rng)
    params = ProductParams.random(3, rng)
    rotated = apply_product_unitary_dagger(target, params)
    assert fidelity_exact(target, params) == pytest.approx(abs(rotated.amplitudes[0]) ** 2)


def test_dimension_mismatch(rng):
    with pytest.raises(DimensionMismatchError):
        fidelity_exact(haar_random_state(2, rng), ProductParams.identity(3))


def test_probabilities_sum_to_one(rng):
    probs = probabilities(haar_random_state(5, rng))
    assert probs.sum() == pytest.approx(1.0)


def test_sample_shots_counts_and_determinism():
    probs = np.array([0.5, 0.0, 0.0, 0.5])
    first = sample_shots(probs, 1000, RngStream(3))
    second = sample_shots(probs, 1000, RngStream(3))
    assert first.total == 1000
    assert first.counts == second.counts
    assert set(first.counts) <= {0, 3}


def test_sample_shots_rejects_bad_input(rng):
    with pytest.raises(ValueError):
        sample_shots(np.array([0.5, 0.5]), 0, rng)
    with pytest.raises(ValueError):
        sample_shots(np.array([0.5, 0.6]), 10, rng)


def test_haar_random_state_is_normalized(rng):
    state = haar_random_state(4, rng)
    assert np.linalg.norm(state.amplitudes) == pytest.approx(1.0)


def test_unitary_from_params_is_unitary_for_random_pairs():
    draws = RngStream(70).generator.standard_normal((1000, 4))
    for re0, im0, re1, im1 in draws:
        u = unitary_from_params(complex(re0, im0), complex(re1, im1))
        assert u.conj().T @ u == pytest.approx(np.eye(2), abs=1e-12)


def test_fidelity_is_invariant_under_qubit_phase(rng):
    target = haar_random_state(4, rng)
    params = ProductParams.random(4, rng)
    for phase in np.exp(1j * rng.generator.uniform(0.0, 2.0 * np.pi, 5)):
        for qubit in range(4):
            rotated = params.entries.copy()
            rotated[qubit] *= phase
            assert fidelity_exact(target, ProductParams(rotated)) == pytest.approx(fidelity_exact(target, params))


@pytest.mark.parametrize("n", range(2, 7))
def test_fidelity_equals_zero_string_probability(n):
    stream = RngStream(71).child(n)
    for _ in range(100):
        target = haar_random_state(n, stream)
        params = ProductParams.random(n, stream)
        rotated = apply_product_unitary_dagger(target, params)
        assert fidelity_exact(target, params) == pytest.approx(probabilities(rotated)[0], abs=1e-12)


def test_single_qubit_haar_mean_population():
    stream = RngStream(72)
    populations = [abs(haar_random_state(1, stream.child(t)).amplitudes[0]) ** 2 for t in range(10 ** 4)]
    assert np.mean(populations) == pytest.approx(0.5, abs=0.02)


def test_sample_shots_uniform_frequencies_within_five_sigma():
    shots = 10 ** 5
    probs = np.full(8, 1.0 / 8)
    record = sample_shots(probs, shots, RngStream(73))
    sigma = np.sqrt(shots * (1.0 / 8) * (7.0 / 8))
    counts = np.array([record.counts.get(index, 0) for index in range(8)])
    assert counts.sum() == shots
    assert np.all(np.abs(counts - shots / 8) <= 5.0 * sigma)
