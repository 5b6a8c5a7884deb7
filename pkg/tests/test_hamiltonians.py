from collections import Counter

import numpy as np
import pytest

from model import DimensionMismatchError, PairPartition, ProductParams, PureState, RngStream, ShotRecord
from quantum.hamiltonians import (
    assemble_hl_diagonal,
    ansatz_distribution,
    enumerate_partitions,
    expected_HL_exact,
    global_infidelity_exact,
    global_infidelity_sampled,
    hl_spectrum,
    infidelity_bounds,
    interpolated_cost,
    local_infidelity_exact,
    pair_infidelities,
    pair_zero_marginals,
    sample_partition,
    xg_estimate,
    xg_from_marginals,
    xg_mse_bound,
)
from quantum.statevector import haar_random_state, product_state_vector
from service.oracle_service import make_named_state


def test_global_infidelity_examples():
    for n in (2, 3, 5):
        assert global_infidelity_exact(make_named_state("GHZ", n), ProductParams.identity(n)) == pytest.approx(0.5)
    assert global_infidelity_exact(make_named_state("W", 3), ProductParams.identity(3)) == pytest.approx(1.0)


def test_global_infidelity_zero_for_matching_product_state(rng):
    params = ProductParams.random(3, rng)
    target = PureState.normalized(product_state_vector(params))
    assert global_infidelity_exact(target, params) == pytest.approx(0.0, abs=1e-12)
    assert global_infidelity_sampled(target, params, 100, rng) == pytest.approx(0.0, abs=1e-12)


def test_global_infidelity_sampled_ghz():
    value = global_infidelity_sampled(make_named_state("GHZ", 3), ProductParams.identity(3), 10 ** 6, RngStream(5))
    # 5σ = 5·0.5/1000
    assert value == pytest.approx(0.5, abs=0.0025)


def test_global_infidelity_sampled_is_reproducible():
    target = make_named_state("W", 3)
    params = ProductParams.identity(3)
    first = global_infidelity_sampled(target, params, 500, RngStream(9))
    second = global_infidelity_sampled(target, params, 500, RngStream(9))
    assert first == second


def test_local_infidelity_examples():
    zero = PureState.basis(3)
    assert local_infidelity_exact(zero, ProductParams.identity(3), 0, 2) == pytest.approx(0.0)
    assert local_infidelity_exact(make_named_state("GHZ", 4), ProductParams.identity(4), 1, 3) == pytest.approx(0.5)
    assert local_infidelity_exact(make_named_state("W", 3), ProductParams.identity(3), 0, 1) == pytest.approx(2.0 / 3.0)
    with pytest.raises(ValueError):
        local_infidelity_exact(zero, ProductParams.identity(3), 1, 1)
    with pytest.raises(DimensionMismatchError):
        local_infidelity_exact(zero, ProductParams.identity(3), 0, 3)


def test_local_infidelity_depends_only_on_its_pair(rng):
    target = haar_random_state(4, rng)
    params = ProductParams.random(4, rng)
    entries = params.entries.copy()
    entries[2:] = ProductParams.random(2, rng).entries
    changed = ProductParams(entries)
    assert local_infidelity_exact(target, params, 0, 1) == pytest.approx(local_infidelity_exact(target, changed, 0, 1))


def test_expected_hl_examples():
    assert expected_HL_exact(make_named_state("GHZ", 4), ProductParams.identity(4)) == pytest.approx(0.5)
    assert expected_HL_exact(make_named_state("W", 3), ProductParams.identity(3)) == pytest.approx(2.0 / 3.0)
    with pytest.raises(ValueError):
        expected_HL_exact(PureState.basis(1), ProductParams.identity(1))


def test_pair_zero_marginals_match_local_infidelities(rng):
    target = haar_random_state(4, rng)
    params = ProductParams.random(4, rng)
    marginals = pair_zero_marginals(ansatz_distribution(target, params))
    assert 1.0 - marginals[1, 3] == pytest.approx(local_infidelity_exact(target, params, 1, 3))
    assert marginals == pytest.approx(marginals.T)


def test_infidelity_bounds_examples():
    ghz = infidelity_bounds(make_named_state("GHZ", 4), ProductParams.identity(4))
    assert (ghz.lower, ghz.global_value, ghz.upper) == pytest.approx((0.5, 0.5, 1.0))
    w = infidelity_bounds(make_named_state("W", 3), ProductParams.identity(3))
    assert (w.lower, w.global_value, w.upper) == pytest.approx((2.0 / 3.0, 1.0, 1.0))
    assert w.holds()


def test_infidelity_bounds_tight_for_product_states(rng):
    params = ProductParams.random(5, rng)
    report = infidelity_bounds(PureState.normalized(product_state_vector(params)), params)
    assert (report.lower, report.global_value, report.upper) == pytest.approx((0.0, 0.0, 0.0), abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_sandwich_holds_on_random_pairs(n):
    stream = RngStream(42).child(n)
    for _ in range(100):
        report = infidelity_bounds(haar_random_state(n, stream), ProductParams.random(n, stream))
        assert report.holds()


def test_sample_partition_n2_is_unique(rng):
    for _ in range(10):
        assert sample_partition(2, rng).canonical() == (((0, 1),), None)
    with pytest.raises(ValueError):
        sample_partition(1, rng)


def test_sample_partition_uniform_over_matchings():
    stream = RngStream(11)
    draws = 30000
    counts = Counter(sample_partition(4, stream).canonical() for _ in range(draws))
    assert len(counts) == 3
    for count in counts.values():
        assert count / draws == pytest.approx(1.0 / 3.0, abs=0.02)


def test_sample_partition_leftover_uniform_for_odd_n():
    stream = RngStream(12)
    draws = 30000
    counts = Counter(sample_partition(5, stream).leftover for _ in range(draws))
    assert sorted(counts) == [0, 1, 2, 3, 4]
    for count in counts.values():
        assert count / draws == pytest.approx(0.2, abs=0.02)


@pytest.mark.parametrize("n, expected", [(2, 1), (3, 3), (4, 3), (5, 15), (6, 15)])
def test_enumerate_partitions_counts(n, expected):
    partitions = list(enumerate_partitions(n))
    assert len(partitions) == expected
    assert len({p.canonical() for p in partitions}) == expected


def test_pair_infidelities_share_one_record():
    record = ShotRecord(3, {0b000: 2, 0b001: 1, 0b110: 1})
    values = pair_infidelities(record, [(0, 1), (1, 2)])
    assert values.tolist() == pytest.approx([1.0 - 2.0 / 4.0, 1.0 - 3.0 / 4.0])


@pytest.mark.parametrize("n", [4, 5, 6])
def test_xg_is_unbiased_over_all_matchings(n, rng):
    target = haar_random_state(n, rng)
    params = ProductParams.random(n, rng)
    marginals = pair_zero_marginals(ansatz_distribution(target, params))
    values = [xg_from_marginals(marginals, g) for g in enumerate_partitions(n)]
    assert abs(np.mean(values) - expected_HL_exact(target, params)) < 1e-12


@pytest.mark.parametrize("n", [4, 6])
def test_xg_variance_below_bound(n):
    stream = RngStream(21).child(n)
    partitions = list(enumerate_partitions(n))
    for _ in range(50):
        target = haar_random_state(n, stream)
        params = ProductParams.random(n, stream)
        hl_value = expected_HL_exact(target, params)
        marginals = pair_zero_marginals(ansatz_distribution(target, params))
        values = np.array([xg_from_marginals(marginals, g) for g in partitions])
        assert np.mean((values - hl_value) ** 2) <= xg_mse_bound(n, hl_value)


def test_xg_estimate_examples(rng):
    params = ProductParams.random(4, rng)
    product = PureState.normalized(product_state_vector(params))
    partition = PairPartition(4, [(0, 2), (1, 3)])
    assert xg_estimate(product, params, partition, 64, rng) == pytest.approx(0.0, abs=1e-12)

    value = xg_estimate(make_named_state("GHZ", 4), ProductParams.identity(4), partition, 10 ** 5, RngStream(8))
    assert value == pytest.approx(0.5, abs=0.01)


def test_xg_estimate_ghz4_million_shots_within_five_sigma():
    # 두 쌍의 주변 확률이 모두 0000 의 빈도이므로 분산은 0.25 / S
    shots = 10 ** 6
    partition = PairPartition(4, [(0, 1), (2, 3)])
    value = xg_estimate(make_named_state("GHZ", 4), ProductParams.identity(4), partition, shots, RngStream(9))
    sigma = np.sqrt(0.25 / shots)
    assert abs(value - 0.5) <= 5.0 * sigma
    assert value == pytest.approx(0.5, abs=0.003)


@pytest.mark.parametrize(
    "n, hl_value, expected",
    [(4, 0.0, 0.5), (4, 1.0, 1.5), (6, 0.0, 1.0 / 3.0)],
)
def test_xg_mse_bound_examples(n, hl_value, expected):
    assert xg_mse_bound(n, hl_value) == pytest.approx(expected)


def test_xg_mse_bound_needs_four_qubits():
    with pytest.raises(ValueError):
        xg_mse_bound(3, 0.1)


def test_hl_spectrum_n4():
    entries = hl_spectrum(4)
    assert [e.eigenvalue for e in entries] == pytest.approx([0.0, 0.5, 5.0 / 6.0, 1.0, 1.0])
    assert [e.multiplicity for e in entries] == [1, 4, 6, 4, 1]


@pytest.mark.parametrize("n", range(2, 9))
def test_hl_spectrum_closed_form_properties(n):
    entries = hl_spectrum(n)
    assert entries[1].eigenvalue == pytest.approx(2.0 / n)
    assert sum(e.multiplicity for e in entries) == 2 ** n
    assert entries[-1].eigenvalue == pytest.approx(1.0)


@pytest.mark.parametrize("n", range(2, 7))
def test_hl_spectrum_matches_assembled_diagonal(n):
    entries = hl_spectrum(n)
    closed = np.repeat([e.eigenvalue for e in entries], [e.multiplicity for e in entries])
    assert np.max(np.abs(np.sort(assemble_hl_diagonal(n)) - closed)) < 1e-12


def test_interpolated_cost_endpoints(rng):
    target = haar_random_state(3, rng)
    params = ProductParams.random(3, rng)
    assert interpolated_cost(target, params, 0.0) == pytest.approx(expected_HL_exact(target, params))
    assert interpolated_cost(target, params, 1.0) == pytest.approx(global_infidelity_exact(target, params))
    assert interpolated_cost(make_named_state("GHZ", 4), ProductParams.identity(4), 0.5) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        interpolated_cost(target, params, 1.5)


def test_interpolated_cost_sampled():
    value = interpolated_cost(
        make_named_state("GHZ", 4), ProductParams.identity(4), 0.5, exact=False, shots=10 ** 5, rng=RngStream(4)
    )
    assert value == pytest.approx(0.5, abs=0.01)
    with pytest.raises(ValueError):
        interpolated_cost(make_named_state("GHZ", 4), ProductParams.identity(4), 0.5, exact=False)
