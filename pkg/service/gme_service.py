import logging
from typing import Callable, Dict, Optional

import numpy as np

import sys
import os

# 프로젝트 루트를 Python path에 추가
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from model import (
    GmeEstimate,
    InvalidConfigError,
    ProductParams,
    PureState,
    RngStream,
    RunTrace,
    VqaConfig,
)
from optim.cspsa import CSPSA, gains_at, gradient_estimate, sample_perturbation, step
from quantum.hamiltonians import (
    global_infidelity_exact,
    global_infidelity_sampled,
    measure_ansatz,
    pair_infidelities,
    sample_partition,
)
from quantum.noise import mitigate_readout
from worker.pool import EnsemblePool

logger = logging.getLogger(__name__)

# 최종 추정값 범위 검사 허용 오차
ESTIMATE_TOLERANCE = 1e-9


def classify_bp(estimate: float, threshold: float = 0.9) -> bool:
    """최적화 후에도 GME 추정값이 threshold 보다 크면 barren plateau 에 갇힌 것으로 본다"""
    if not (-ESTIMATE_TOLERANCE <= estimate <= 1.0 + ESTIMATE_TOLERANCE):
        raise ValueError(f"GME estimate must lie in [0, 1], got {estimate}")
    return estimate > threshold


def final_estimate(
    target: PureState,
    params: ProductParams,
    config: VqaConfig,
    rng: RngStream,
    mitigate: Optional[bool] = None,
) -> float:
    """
    실행 종료 시점의 GME 추정값

    노이즈가 없으면 최종 θ 에서의 정확한 비충실도,
    노이즈가 있으면 final_shots 로 한 번 더 측정하고 (설정에 따라) 측정 오류를 완화한 값.
    """
    if not config.noisy:
        return global_infidelity_exact(target, params)
    if mitigate is None:
        mitigate = config.mitigation == "final"
    record = measure_ansatz(target, params, config.final_shots, rng, config.noise)
    probs = record.empirical_distribution()
    if mitigate and config.noise.has_readout_error():
        probs = mitigate_readout(probs, config.noise).probabilities
    return float(min(1.0, max(0.0, 1.0 - probs[0])))


def _global_stage(
    target: PureState,
    params: ProductParams,
    config: VqaConfig,
    rng: RngStream,
    trace: RunTrace,
    start_index: int = 0,
) -> ProductParams:
    if config.n_global == 0:
        return params

    def cost(flat: np.ndarray) -> float:
        return global_infidelity_sampled(
            target, ProductParams.from_flat(flat), config.shots_global, rng, config.noise
        )

    def record(k: int, theta: np.ndarray, f_plus: float, f_minus: float):
        exact = global_infidelity_exact(target, ProductParams.from_flat(theta))
        trace.append("global", 0.5 * (f_plus + f_minus), exact, 2 * config.shots_global)
        logger.debug(f"Global iteration {k} - cost={0.5 * (f_plus + f_minus):.6f}, exact={exact:.6f}")

    optimizer = CSPSA(config.gains_global, rng, start_index=start_index)
    theta = optimizer.minimize(cost, params.flat(), config.n_global, callback=record)
    return ProductParams.from_flat(theta)


def _local_stage(
    target: PureState,
    params: ProductParams,
    config: VqaConfig,
    rng: RngStream,
    trace: RunTrace,
) -> ProductParams:
    """
    국소 단계: 매 반복 쌍 분할을 새로 뽑고, 공유 섭동 하나로 전체 레지스터를 두 번 측정한 뒤
    쌍마다 자기 주변 비충실도로 4개 복소 파라미터를 갱신한다. 남는 큐비트는 그대로 둔다.
    """
    n = target.n
    theta = params.flat()
    for k in range(config.n_local):
        partition = sample_partition(n, rng)
        a_k, c_k = gains_at(config.gains_local, k)
        delta = sample_perturbation(2 * n, rng)

        plus = measure_ansatz(
            target, ProductParams.from_flat(theta + c_k * delta.delta), config.shots_local, rng, config.noise
        )
        minus = measure_ansatz(
            target, ProductParams.from_flat(theta - c_k * delta.delta), config.shots_local, rng, config.noise
        )
        i_plus = pair_infidelities(plus, partition.pairs)
        i_minus = pair_infidelities(minus, partition.pairs)

        updated = theta.copy()
        for index, (i, j) in enumerate(partition.pairs):
            components = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
            grad = gradient_estimate(i_plus[index], i_minus[index], c_k, delta[components])
            updated[components] = step(theta[components], grad, a_k)
        theta = updated

        exact = global_infidelity_exact(target, ProductParams.from_flat(theta))
        cost = 0.5 * (float(np.mean(i_plus)) + float(np.mean(i_minus)))
        trace.append("local", cost, exact, 2 * config.shots_local)
        logger.debug(f"Local iteration {k} - partition={partition.pairs}, cost={cost:.6f}, exact={exact:.6f}")
    return ProductParams.from_flat(theta)


def _finish(target: PureState, params: ProductParams, config: VqaConfig, rng: RngStream, trace: RunTrace) -> RunTrace:
    trace.final_params = params
    trace.final_estimate = final_estimate(target, params, config, rng)
    logger.info(
        f"Run finished - method={trace.method}, n={trace.n}, "
        f"iterations={len(trace.records)}, cumShots={trace.cum_shots}, "
        f"estimate={trace.final_estimate:.6f}"
    )
    return trace


def run_vdge(target: PureState, config: VqaConfig, rng: RngStream) -> RunTrace:
    """무작위 초기 파라미터에서 전역 비충실도만 CSPSA 로 N_G 회 최소화"""
    config.validate("vdge")
    trace = RunTrace("vdge", target.n)
    params = ProductParams.random(target.n, rng)
    params = _global_stage(target, params, config, rng, trace)
    return _finish(target, params, config, rng, trace)


def run_ivdge(target: PureState, config: VqaConfig, rng: RngStream) -> RunTrace:
    """국소 단계 N_L 회 후 같은 θ 로 VDGE 루프 N_G 회"""
    config.validate("ivdge")
    if target.n < 2:
        raise InvalidConfigError(f"iVDGE needs n >= 2, got {target.n}")
    trace = RunTrace("ivdge", target.n)
    params = ProductParams.random(target.n, rng)
    params = _local_stage(target, params, config, rng, trace)
    start_index = config.n_local if config.continue_counter else 0
    params = _global_stage(target, params, config, rng, trace, start_index=start_index)
    return _finish(target, params, config, rng, trace)


RUNNERS: Dict[str, Callable[[PureState, VqaConfig, RngStream], RunTrace]] = {
    "vdge": run_vdge,
    "ivdge": run_ivdge,
}


def best_of_repetitions(
    target: PureState,
    config: VqaConfig,
    method: str = "ivdge",
    rng: Optional[RngStream] = None,
    jobs: int = 1,
) -> GmeEstimate:
    """
    서로 다른 무작위 초기값으로 R 번 실행하고 최솟값을 GME 추정값으로 선택

    Args:
        target: 대상 상태
        config: 실행 설정 (repetitions, seed 사용)
        method: vdge 또는 ivdge
        rng: 상위 스트림 (없으면 RngStream(config.seed)); 반복 r 은 rng.child(r)
        jobs: 반복을 동시에 실행할 워커 수

    Returns:
        GmeEstimate
    """
    runner = RUNNERS.get(method)
    if runner is None:
        raise InvalidConfigError(f"unknown method: {method} (expected one of {sorted(RUNNERS)})")
    config.validate(method)
    if config.repetitions < 1:
        raise InvalidConfigError(f"repetitions must be >= 1, got {config.repetitions}")
    base = rng or RngStream(config.seed)

    pool = EnsemblePool(jobs, name=f"{method}-repetitions")
    traces = pool.map(lambda rep: runner(target, config, base.child(rep)), range(config.repetitions))
    finals = [trace.final_estimate for trace in traces]
    best_rep = int(np.argmin(finals))
    value = finals[best_rep]
    return GmeEstimate(
        value=value,
        best_rep=best_rep,
        traces=traces,
        bp_flag=classify_bp(value, config.bp_threshold),
    )
