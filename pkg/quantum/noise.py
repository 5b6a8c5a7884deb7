import logging

import numpy as np

from model import MitigatedDistribution, NoiseModel, SingularConfusionError
from quantum.statevector import qubit_count

logger = logging.getLogger(__name__)

# 노이즈 연구 기본값: 준비된 GHZ(7) 비용 바닥이 0.5 근처(약간 아래)가 되도록 선택
DEFAULT_DEPOLARIZING = 0.02
DEFAULT_READOUT_FLIP = 0.015

SINGULARITY_TOLERANCE = 1e-6


def default_noise_model() -> NoiseModel:
    return NoiseModel.uniform(DEFAULT_DEPOLARIZING, DEFAULT_READOUT_FLIP, DEFAULT_READOUT_FLIP)


def _apply_per_qubit(probs: np.ndarray, matrices) -> np.ndarray:
    """큐비트별 2x2 행렬을 텐서 축마다 적용 (O(n·2^n))"""
    n = len(matrices)
    tensor = probs.reshape((2,) * n)
    for qubit, matrix in enumerate(matrices):
        axis = n - 1 - qubit
        tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)
    return tensor.reshape(-1)


def corrupt_distribution(probs: np.ndarray, model: NoiseModel) -> np.ndarray:
    """
    p' = (1 - p_d)·(C_1⊗…⊗C_n)p + p_d·uniform

    Args:
        probs: 이상적인 계산 기저 분포
        model: 노이즈 모델

    Returns:
        노이즈가 적용된 분포 (합 1)
    """
    probs = np.asarray(probs, dtype=np.float64)
    n = qubit_count(probs.shape[0])
    if model.has_readout_error():
        probs = _apply_per_qubit(probs, [model.confusion_matrix(q, n) for q in range(n)])
    if model.depolarizing:
        probs = (1.0 - model.depolarizing) * probs + model.depolarizing / probs.shape[0]
    return probs / probs.sum()


def mitigate_readout(empirical: np.ndarray, model: NoiseModel) -> MitigatedDistribution:
    """
    큐비트별 혼동 행렬의 역행렬을 적용해 측정 오류 완화

    탈분극 노이즈는 되돌리지 않는다. 음수 준확률은 0으로 자른 뒤 재정규화.
    """
    empirical = np.asarray(empirical, dtype=np.float64)
    n = qubit_count(empirical.shape[0])
    inverses = []
    for qubit in range(n):
        p01, p10 = model.readout_for(qubit, n)
        determinant = 1.0 - p01 - p10
        if abs(determinant) <= SINGULARITY_TOLERANCE:
            raise SingularConfusionError(
                f"confusion matrix of qubit {qubit} is singular (p01={p01}, p10={p10})"
            )
        inverses.append(np.linalg.inv(model.confusion_matrix(qubit, n)))

    quasi = _apply_per_qubit(empirical, inverses) if model.has_readout_error() else empirical.copy()
    clipped = np.clip(quasi, 0.0, None)
    total = clipped.sum()
    if total <= 0.0:
        logger.warning("Mitigated distribution clipped to zero, falling back to the empirical one")
        clipped, total = empirical.copy(), empirical.sum()
    negative_mass = float(-quasi[quasi < 0].sum())
    if negative_mass > 0.0:
        logger.debug(f"Readout mitigation clipped quasi-probabilities - negativeMass={negative_mass:.3e}")
    return MitigatedDistribution(quasi_probabilities=quasi, probabilities=clipped / total)
