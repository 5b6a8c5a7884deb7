import numpy as np
import pytest
from scipy.optimize import minimize

from model import InvalidConfigError, OracleGuardError, PureState, RngStream
from quantum.statevector import haar_random_state
from service import oracle_service
from service.oracle_service import (
    _product_cost_factory,
    exact_gme_product,
    exact_gme_symmetric,
    make_named_state,
    normalize_family,
)


def test_normalize_family_is_case_insensitive():
    assert normalize_family("ghzw") == "GHZW"
    assert normalize_family("wtilde") == "Wtilde"
    with pytest.raises(InvalidConfigError):
        normalize_family("cluster")


def test_ghz2_amplitudes():
    state = make_named_state("GHZ", 2)
    assert state.amplitudes == pytest.approx(np.array([1, 0, 0, 1]) / np.sqrt(2))


def test_w3_amplitudes():
    state = make_named_state("W", 3)
    expected = np.zeros(8)
    expected[[1, 2, 4]] = 1.0 / np.sqrt(3)
    assert state.amplitudes == pytest.approx(expected)


def test_wtilde3_amplitudes():
    state = make_named_state("Wtilde", 3)
    expected = np.zeros(8)
    expected[[3, 5, 6]] = 1.0 / np.sqrt(3)
    assert state.amplitudes == pytest.approx(expected)


def test_superposition_endpoints():
    assert make_named_state("GHZW", 5, 1.0).amplitudes == pytest.approx(make_named_state("GHZ", 5).amplitudes)
    assert make_named_state("GHZW", 5, 0.0).amplitudes == pytest.approx(make_named_state("W", 5).amplitudes)
    assert make_named_state("WWtilde", 4, 0.0).amplitudes == pytest.approx(make_named_state("Wtilde", 4).amplitudes)


def test_wwtilde_collapses_to_w_for_two_qubits():
    state = make_named_state("WWtilde", 2, 0.3)
    assert state.amplitudes == pytest.approx(make_named_state("W", 2).amplitudes)


def test_named_state_argument_errors():
    with pytest.raises(InvalidConfigError):
        make_named_state("GHZW", 4)
    with pytest.raises(InvalidConfigError):
        make_named_state("GHZW", 4, 1.5)
    with pytest.raises(InvalidConfigError):
        make_named_state("GHZ", 1)


def test_product_cost_gradient_matches_finite_differences():
    rng = RngStream(60)
    target = PureState.normalized(rng.generator.standard_normal(8) + 1j * rng.generator.standard_normal(8))
    cost_and_grad = _product_cost_factory(target)
    x = rng.generator.uniform(0.0, np.pi, 6)
    _, grad = cost_and_grad(x)
    step = 1e-6
    numeric = np.array([
        (cost_and_grad(x + step * e)[0] - cost_and_grad(x - step * e)[0]) / (2 * step) for e in np.eye(6)
    ])
    assert grad == pytest.approx(numeric, abs=1e-6)


@pytest.mark.parametrize("n", range(2, 6))
def test_product_oracle_ghz(n):
    assert exact_gme_product(make_named_state("GHZ", n), restarts=5, hops=3) == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_product_oracle_w(n):
    expected = 1.0 - ((n - 1) / n) ** (n - 1)
    assert exact_gme_product(make_named_state("W", n), restarts=5, hops=3) == pytest.approx(expected, abs=1e-6)


def test_product_oracle_product_state():
    assert exact_gme_product(PureState.basis(3), restarts=2, hops=1) == pytest.approx(0.0, abs=1e-9)


def test_product_oracle_guard():
    with pytest.raises(OracleGuardError):
        exact_gme_product(make_named_state("GHZ", 3), max_qubits=2)
    with pytest.raises(ValueError):
        exact_gme_product(make_named_state("GHZ", 3), restarts=0)


def test_product_oracle_uses_scipy_basinhopping(monkeypatch):
    calls = []
    real = oracle_service.basinhopping

    def recording(func, x0, **kwargs):
        calls.append(kwargs)
        return real(func, x0, **kwargs)

    monkeypatch.setattr(oracle_service, "basinhopping", recording)
    exact_gme_product(make_named_state("GHZ", 3), restarts=3, hops=4, rng=RngStream(63))
    assert len(calls) == 3
    assert all(call["niter"] == 4 and call["minimizer_kwargs"]["method"] == "BFGS" for call in calls)


def test_product_oracle_is_reproducible_and_beats_one_local_search():
    target = haar_random_state(4, RngStream(64))
    first = exact_gme_product(target, restarts=1, hops=5, rng=RngStream(65))
    assert exact_gme_product(target, restarts=1, hops=5, rng=RngStream(65)) == first

    generator = RngStream(65).generator
    x0 = np.concatenate([generator.uniform(0.0, np.pi, 4), generator.uniform(0.0, 2.0 * np.pi, 4)])
    single = minimize(_product_cost_factory(target), x0, jac=True, method="BFGS", options={"gtol": 1e-10, "maxiter": 2000})
    assert first <= single.fun + 1e-9
    assert exact_gme_product(target, restarts=4, hops=5, rng=RngStream(65)) <= first + 1e-12


def test_product_oracle_rejects_negative_hops():
    with pytest.raises(ValueError):
        exact_gme_product(make_named_state("GHZ", 3), hops=-1)


@pytest.mark.parametrize("n", [3, 10, 18])
def test_symmetric_oracle_ghz_endpoint(n):
    assert exact_gme_symmetric("GHZW", n, 1.0) == pytest.approx(0.5, abs=1e-6)


def test_symmetric_oracle_w_endpoint():
    assert exact_gme_symmetric("GHZW", 18, 0.0) == pytest.approx(1.0 - (17.0 / 18.0) ** 17, abs=1e-6)


def test_symmetric_oracle_accepts_pure_families():
    assert exact_gme_symmetric("GHZ", 6, None) == pytest.approx(0.5, abs=1e-6)
    assert exact_gme_symmetric("Wtilde", 4, None) == pytest.approx(1.0 - (3.0 / 4.0) ** 3, abs=1e-6)


def test_symmetric_oracle_argument_errors():
    with pytest.raises(InvalidConfigError):
        exact_gme_symmetric("GHZW", 4, -0.1)
    with pytest.raises(InvalidConfigError):
        exact_gme_symmetric("GHZW", 1, 0.5)


@pytest.mark.parametrize("family", ["GHZW", "WWtilde"])
@pytest.mark.parametrize("s", [0.0, 0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("n", [3, 4])
def test_symmetric_and_product_oracles_agree(family, s, n):
    symmetric = exact_gme_symmetric(family, n, s)
    product = exact_gme_product(make_named_state(family, n, s), rng=RngStream(61))
    assert symmetric == pytest.approx(product, abs=1e-5)


@pytest.mark.slow
@pytest.mark.parametrize("family", ["GHZW", "WWtilde"])
@pytest.mark.parametrize("s", [0.0, 0.25, 0.5, 0.75, 1.0])
@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_symmetric_and_product_oracles_agree_larger_registers(family, s, n):
    symmetric = exact_gme_symmetric(family, n, s)
    product = exact_gme_product(make_named_state(family, n, s), rng=RngStream(62))
    assert symmetric == pytest.approx(product, abs=1e-5)
