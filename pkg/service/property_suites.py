import logging
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from model import (
    ExperimentSpec,
    InvalidConfigError,
    NoiseModel,
    Perturbation,
    ProductParams,
    PureState,
    RngStream,
    SuiteReport,
    VqaConfig,
)
from optim.cspsa import PRESETS, gains_at, gradient_estimate, preset_gains, sample_perturbation
from quantum.hamiltonians import (
    BOUNDS_TOLERANCE,
    ansatz_distribution,
    assemble_hl_diagonal,
    enumerate_partitions,
    expected_HL_exact,
    hl_spectrum,
    infidelity_bounds,
    pair_zero_marginals,
    xg_from_marginals,
    xg_mse_bound,
)
from quantum.noise import corrupt_distribution, default_noise_model, mitigate_readout
from quantum.statevector import haar_random_state, product_state_vector
from service.gme_service import final_estimate
from service.oracle_service import make_named_state

logger = logging.getLogger(__name__)

# 검사별 허용 오차
UNBIASED_TOLERANCE = 1e-12
SPECTRUM_TOLERANCE = 1e-12
MITIGATION_TOLERANCE = 1e-10
ENUMERATION_TOLERANCE = 1e-8
GRADIENT_RELATIVE_TOLERANCE = 0.02
GRADIENT_SIGMA_BAND = 5.0
GRADIENT_PERTURBATION = 1e-4

DEFAULT_SAMPLES = {
    "bounds-check": 1000,
    "estimator-check": 200,
    "gradient-check": 10000,
    "mitigation-check": 100,
}


def _sizes(spec: ExperimentSpec, default: Sequence[int], minimum: int) -> List[int]:
    if spec.n is None:
        return list(default)
    if spec.n < minimum:
        raise InvalidConfigError(f"{spec.kind} needs n >= {minimum}, got {spec.n}")
    return [spec.n]


def _samples(spec: ExperimentSpec) -> int:
    samples = spec.samples if spec.samples is not None else DEFAULT_SAMPLES[spec.kind]
    if samples < 1:
        raise InvalidConfigError(f"samples must be >= 1, got {samples}")
    return samples


def bounds_suite(spec: ExperimentSpec, rng: RngStream) -> SuiteReport:
    """⟨H_L⟩ ≤ I ≤ (n/2)⟨H_L⟩ 샌드위치, 0 일치, 곱 상태에서의 등호"""
    report = SuiteReport("bounds")
    samples = _samples(spec)
    for n in _sizes(spec, range(2, 9), 2):
        stream = rng.child(n)
        worst = np.inf
        mismatched = 0
        for _ in range(samples):
            bounds = infidelity_bounds(haar_random_state(n, stream), ProductParams.random(n, stream))
            worst = min(
                worst,
                bounds.global_value - bounds.lower + BOUNDS_TOLERANCE,
                bounds.upper + BOUNDS_TOLERANCE - bounds.global_value,
            )
            if (bounds.hl_value < BOUNDS_TOLERANCE) != (bounds.global_value < BOUNDS_TOLERANCE):
                mismatched += 1
        report.add("sandwich", n, worst, f"samples={samples}")
        report.add("zero_coincidence", n, -float(mismatched), f"mismatched={mismatched}")

        params = ProductParams.random(n, stream)
        bounds = infidelity_bounds(PureState.normalized(product_state_vector(params)), params)
        largest = max(abs(bounds.lower), abs(bounds.global_value), abs(bounds.upper))
        report.add("product_tight", n, BOUNDS_TOLERANCE - largest)
    return report


def estimator_suite(spec: ExperimentSpec, rng: RngStream) -> SuiteReport:
    """모든 매칭을 열거해 X_g 의 불편성과 MSE 상한 확인 (정확한 주변 확률 사용)"""
    report = SuiteReport("estimator")
    samples = _samples(spec)
    for n in _sizes(spec, (4, 6), 4):
        stream = rng.child(n)
        partitions = list(enumerate_partitions(n))
        worst_bias = 0.0
        worst_mse = np.inf
        for _ in range(samples):
            target = haar_random_state(n, stream)
            params = ProductParams.random(n, stream)
            hl_value = expected_HL_exact(target, params)
            marginals = pair_zero_marginals(ansatz_distribution(target, params))
            values = np.array([xg_from_marginals(marginals, g) for g in partitions])
            worst_bias = max(worst_bias, abs(values.mean() - hl_value))
            mse = float(np.mean((values - hl_value) ** 2))
            worst_mse = min(worst_mse, xg_mse_bound(n, hl_value) - mse)
        report.add("unbiased", n, UNBIASED_TOLERANCE - worst_bias, f"matchings={len(partitions)}")
        report.add("mse_bound", n, worst_mse, f"samples={samples}")
    return report


def spectrum_suite(spec: ExperimentSpec, rng: Optional[RngStream] = None) -> SuiteReport:
    report = SuiteReport("spectrum")
    for n in _sizes(spec, range(2, 9), 2):
        entries = hl_spectrum(n)
        eigenvalues = np.array([entry.eigenvalue for entry in entries])
        multiplicities = np.array([entry.multiplicity for entry in entries])

        report.add("ground", n, SPECTRUM_TOLERANCE - abs(eigenvalues[0]) - abs(multiplicities[0] - 1))
        report.add("first_excited", n, SPECTRUM_TOLERANCE - abs(eigenvalues[1] - 2.0 / n) - abs(multiplicities[1] - n))
        report.add("maximum", n, SPECTRUM_TOLERANCE - abs(eigenvalues.max() - 1.0))
        report.add("multiplicity_sum", n, -float(abs(multiplicities.sum() - 2 ** n)))
        report.add("nondecreasing", n, float(np.min(np.diff(eigenvalues))) + SPECTRUM_TOLERANCE)
        if n <= 6:
            assembled = np.sort(assemble_hl_diagonal(n))
            closed = np.repeat(eigenvalues, multiplicities)
            report.add("assembled", n, SPECTRUM_TOLERANCE - float(np.max(np.abs(assembled - closed))))
    return report


def _random_quadratic(dim: int, rng: RngStream):
    generator = rng.generator
    draws = generator.standard_normal((2, dim, dim))
    root = draws[0] + 1j * draws[1]
    matrix = root.conj().T @ root / dim + 0.1 * np.eye(dim)
    theta = (generator.standard_normal(dim) + 1j * generator.standard_normal(dim)) / np.sqrt(2.0)

    def cost(x: np.ndarray) -> np.ndarray:
        # f(θ) = θ† M θ (행 단위로 벡터화)
        return np.real(np.einsum("...i,ij,...j->...", np.conj(x), matrix, x))

    return cost, theta, matrix @ theta


def gradient_suite(spec: ExperimentSpec, rng: RngStream) -> SuiteReport:
    """
    복소 이차형식에서 CSPSA 그래디언트 추정의 평균이 ∂f/∂θ* = Mθ 인지 확인

    dim <= 6 은 4^dim 개 섭동 전체를 열거 (정확히 불편), 그 외에는 표본 평균과
    성분별 max(2% 상대오차, 5σ 표준오차) 대역으로 비교한다.
    """
    report = SuiteReport("gradient")
    samples = _samples(spec)
    c_k = GRADIENT_PERTURBATION
    for dim in _sizes(spec, (2, 4, 8, 16), 1):
        stream = rng.child(dim)
        cost, theta, wirtinger = _random_quadratic(dim, stream)

        if dim <= 6:
            deltas = np.array(list(product(Perturbation.SYMBOLS, repeat=dim)))
            diffs = cost(theta + c_k * deltas) - cost(theta - c_k * deltas)
            enumerated = (diffs / (2.0 * c_k))[:, None] * deltas
            error = float(np.max(np.abs(enumerated.mean(axis=0) - wirtinger)))
            report.add("enumerated_unbiased", dim, ENUMERATION_TOLERANCE - error, f"perturbations={deltas.shape[0]}")

        estimates = np.empty((samples, dim), dtype=np.complex128)
        for index in range(samples):
            delta = sample_perturbation(dim, stream)
            estimates[index] = gradient_estimate(
                float(cost(theta + c_k * delta.delta)), float(cost(theta - c_k * delta.delta)), c_k, delta
            )
        error = np.abs(estimates.mean(axis=0) - wirtinger)
        standard_error = np.abs(estimates.std(axis=0)) / np.sqrt(samples)
        band = np.maximum(GRADIENT_RELATIVE_TOLERANCE * np.abs(wirtinger), GRADIENT_SIGMA_BAND * standard_error)
        report.add("sampled_unbiased", dim, float(np.min(band - error)), f"samples={samples}")

    for name in sorted(PRESETS):
        gains = preset_gains(name)
        schedule = np.array([gains_at(gains, k) for k in range(1000)])
        report.add(f"monotone_{name}", 0, float(np.min(-np.diff(schedule, axis=0))))
    return report


def mitigation_suite(spec: ExperimentSpec, rng: RngStream) -> SuiteReport:
    """mitigate ∘ corrupt = 항등 (측정 오류만), 확률 보존, GHZ 에서의 완화 효과 방향"""
    report = SuiteReport("mitigation")
    for n in _sizes(spec, range(1, 9), 1):
        stream = rng.child(n)
        generator = stream.generator
        probs = generator.dirichlet(np.ones(2 ** n))
        readout = [tuple(pair) for pair in generator.uniform(0.0, 0.1, (n, 2))]

        readout_only = NoiseModel(0.0, readout)
        quasi = mitigate_readout(corrupt_distribution(probs, readout_only), readout_only).quasi_probabilities
        report.add("exact_inverse", n, MITIGATION_TOLERANCE - float(np.max(np.abs(quasi - probs))))

        noisy = corrupt_distribution(probs, NoiseModel(generator.uniform(0.0, 0.2), readout))
        report.add("trace_preserving", n, MITIGATION_TOLERANCE - abs(float(noisy.sum()) - 1.0))

    # 단조 피해: 같은 시드로 완화 없이/완화하여 추정
    trials = _samples(spec)
    n = spec.n if spec.n is not None and spec.n >= 2 else 4
    target = make_named_state("GHZ", n)
    config = VqaConfig(noise=default_noise_model(), shots_global=1024)
    params = ProductParams.identity(n)
    base = rng.child(1000)
    raw = [final_estimate(target, params, config, base.child(t), mitigate=False) for t in range(trials)]
    mitigated = [final_estimate(target, params, config, base.child(t), mitigate=True) for t in range(trials)]
    report.add("monotone_harm", n, float(np.mean(raw) - np.mean(mitigated)), f"trials={trials}")
    return report


SUITES: Dict[str, Callable[[ExperimentSpec, RngStream], SuiteReport]] = {
    "bounds-check": bounds_suite,
    "estimator-check": estimator_suite,
    "spectrum-check": spectrum_suite,
    "gradient-check": gradient_suite,
    "mitigation-check": mitigation_suite,
}


def run_property_suites(spec: ExperimentSpec) -> List[SuiteReport]:
    """
    ExperimentSpec.kind 에 해당하는 속성 검사 실행

    Returns:
        SuiteReport 목록 (검사별 margin 포함; margin < 0 이면 실패)
    """
    suite = SUITES.get(spec.kind)
    if suite is None:
        raise InvalidConfigError(f"no property suite for kind: {spec.kind}")
    rng = RngStream(spec.seed if spec.seed is not None else 0)
    report = suite(spec, rng)
    for failure in report.failures():
        logger.warning(
            f"Property check failed - suite={failure.suite}, check={failure.check}, "
            f"n={failure.n}, margin={failure.margin:.3e}"
        )
    logger.info(f"Property suite finished - suite={report.suite}, checks={len(report.checks)}, passed={report.passed}")
    return [report]
