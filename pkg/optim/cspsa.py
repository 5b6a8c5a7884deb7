"""
복소 SPSA (CSPSA) 최적화기

그래디언트 추정은 Wirtinger 미분 ∂f/∂θ* 의 불편 추정량이 되도록
(f+ - f-)/(2c_k) 에 Δ_i 를 곱한다 (= conj(Δ_i) 로 나눔).
"""
import logging
from typing import Callable, Dict, Optional

import numpy as np

from model import (
    DimensionMismatchError,
    GainSet,
    InvalidConfigError,
    Perturbation,
    RngStream,
)

logger = logging.getLogger(__name__)

# 갱신 후 큐비트별 2-벡터 노름이 이보다 작으면 해당 큐비트 갱신을 거부
DEGENERATE_NORM = 1e-12

PRESETS: Dict[str, Dict[str, float]] = {
    "standard": {"a": 3.0, "b": 0.1, "A": 0.0, "s": 0.602, "r": 0.101},
    "asymptotic": {"a": 3.0, "b": 0.1, "A": 0.0, "s": 1.0, "r": 0.166},
}


def preset_gains(name: str, A: Optional[float] = None) -> GainSet:
    preset = PRESETS.get(name)
    if preset is None:
        raise InvalidConfigError(f"unknown gain preset: {name} (expected one of {sorted(PRESETS)})")
    gains = GainSet.from_dict(preset)
    return gains if A is None else gains.with_offset(A)


def gains_at(gains: GainSet, k: int):
    """(a_k, c_k) = (a/(k+1+A)^s, b/(k+1)^r)"""
    if k < 0:
        raise ValueError(f"iteration index must be >= 0, got {k}")
    a_k = gains.a / (k + 1 + gains.A) ** gains.s
    c_k = gains.b / (k + 1) ** gains.r
    return a_k, c_k


def sample_perturbation(dim: int, rng: RngStream) -> Perturbation:
    if dim < 1:
        raise ValueError(f"perturbation dimension must be >= 1, got {dim}")
    symbols = rng.generator.integers(0, 4, size=dim)
    return Perturbation(Perturbation.SYMBOLS[symbols])


def gradient_estimate(f_plus: float, f_minus: float, c_k: float, delta: Perturbation) -> np.ndarray:
    if c_k <= 0:
        raise ValueError(f"perturbation magnitude must be positive, got {c_k}")
    return (f_plus - f_minus) / (2.0 * c_k) * delta.delta


def step(theta: np.ndarray, grad: np.ndarray, a_k: float, renormalize: bool = True) -> np.ndarray:
    """
    θ - a_k·ĝ

    평탄화된 θ 의 연속된 2-성분이 큐비트 하나의 파라미터이다.
    갱신 후 노름이 DEGENERATE_NORM 미만인 큐비트는 이전 값을 유지한다.
    renormalize 이면 받아들인 큐비트 2-벡터를 단위 노름으로 되돌린다.
    비용은 큐비트별 방향에만 의존한다.
    """
    theta = np.asarray(theta, dtype=np.complex128).reshape(-1)
    grad = np.asarray(grad, dtype=np.complex128).reshape(-1)
    if theta.shape != grad.shape:
        raise DimensionMismatchError(f"parameter length {theta.shape[0]} != gradient length {grad.shape[0]}")
    if theta.shape[0] % 2:
        raise DimensionMismatchError(f"flat parameter length must be even, got {theta.shape[0]}")
    updated = (theta - a_k * grad).reshape(-1, 2)
    norms = np.linalg.norm(updated, axis=1)
    rejected = norms < DEGENERATE_NORM
    if rejected.any():
        logger.warning(f"Degenerate update rejected - qubits={np.flatnonzero(rejected).tolist()}")
        updated[rejected] = theta.reshape(-1, 2)[rejected]
    if renormalize:
        accepted = ~rejected
        updated[accepted] /= norms[accepted, None]
    return updated.reshape(-1)


class CSPSA:
    """
    CSPSA 최소화 루프

    cost 는 평탄화된 θ 를 받아 (노이즈가 있을 수 있는) 실수 비용을 돌려준다.
    callback(k, theta, f_plus, f_minus) 는 매 반복 갱신 후 호출된다.
    """

    def __init__(self, gains: GainSet, rng: RngStream, start_index: int = 0, renormalize: bool = True):
        self.gains = gains
        self.rng = rng
        self.start_index = start_index
        self.renormalize = renormalize

    def iterate(self, cost: Callable[[np.ndarray], float], theta: np.ndarray, k: int) -> tuple:
        a_k, c_k = gains_at(self.gains, self.start_index + k)
        delta = sample_perturbation(theta.shape[0], self.rng)
        f_plus = cost(theta + c_k * delta.delta)
        f_minus = cost(theta - c_k * delta.delta)
        grad = gradient_estimate(f_plus, f_minus, c_k, delta)
        return step(theta, grad, a_k, self.renormalize), f_plus, f_minus

    def minimize(
        self,
        cost: Callable[[np.ndarray], float],
        theta0: np.ndarray,
        n_iter: int,
        callback: Optional[Callable[[int, np.ndarray, float, float], None]] = None,
    ) -> np.ndarray:
        theta = np.asarray(theta0, dtype=np.complex128).reshape(-1).copy()
        for k in range(n_iter):
            theta, f_plus, f_minus = self.iterate(cost, theta, k)
            if callback is not None:
                callback(k, theta, f_plus, f_minus)
        return theta
