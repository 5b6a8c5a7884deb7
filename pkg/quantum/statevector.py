from functools import lru_cache

import numpy as np

from model import (
    DegenerateParameterError,
    DimensionMismatchError,
    INPUT_NORM_TOLERANCE,
    MIN_PARAM_NORM,
    ProductParams,
    PureState,
    RngStream,
    ShotRecord,
)


@lru_cache(maxsize=32)
def basis_bits(n: int) -> np.ndarray:
    """
    기저 인덱스별 비트 행렬

    Returns:
        shape (2^n, n) uint8, [x, j] = 인덱스 x의 비트 j (큐비트 j)
    """
    indices = np.arange(2 ** n, dtype=np.int64)
    bits = ((indices[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(np.uint8)
    bits.setflags(write=False)
    return bits


def qubit_count(dimension: int) -> int:
    n = int(round(np.log2(dimension))) if dimension > 0 else 0
    if n < 1 or 2 ** n != dimension:
        raise DimensionMismatchError(f"vector length {dimension} is not a power of two >= 2")
    return n


def unitary_from_params(z0: complex, z1: complex) -> np.ndarray:
    """
    파라미터 2-벡터로부터 단일 큐비트 유니터리 생성

    첫 번째 열 = (z0, z1)/norm, 두 번째 열 = (-conj(z1), conj(z0))/norm
    """
    norm = np.hypot(abs(z0), abs(z1))
    if norm <= MIN_PARAM_NORM:
        raise DegenerateParameterError(f"parameter vector ({z0}, {z1}) is zero")
    return np.array(
        [[z0, -np.conj(z1)], [z1, np.conj(z0)]],
        dtype=np.complex128,
    ) / norm


def apply_product_unitary_dagger(state: PureState, params: ProductParams) -> PureState:
    """|α(θ)⟩ = U†(θ)|Ψ⟩, 큐비트마다 U_j† 를 차례로 적용 (O(n·2^n))"""
    _check_dimensions(state, params)
    n = state.n
    tensor = state.amplitudes.reshape((2,) * n)
    for qubit, (z0, z1) in enumerate(params.entries):
        # C-order reshape 에서 큐비트 j 는 축 n-1-j
        axis = n - 1 - qubit
        dagger = unitary_from_params(z0, z1).conj().T
        tensor = np.moveaxis(np.tensordot(dagger, tensor, axes=([1], [axis])), 0, axis)
    return PureState.normalized(tensor.reshape(-1))


def probabilities(state: PureState) -> np.ndarray:
    probs = np.abs(state.amplitudes) ** 2
    return probs / probs.sum()


def product_state_vector(params: ProductParams) -> np.ndarray:
    """⊗_j U_j|0⟩ 의 진폭 벡터"""
    vector = np.ones(1, dtype=np.complex128)
    # kron 의 앞 인자가 상위 비트 -> 큐비트 0 이 가장 안쪽
    for local in params.local_states():
        vector = np.kron(local, vector)
    return vector


def fidelity_exact(target: PureState, params: ProductParams) -> float:
    """|⟨0…0|U†(θ)|Ψ⟩|² = |⟨φ(θ)|Ψ⟩|²"""
    _check_dimensions(target, params)
    overlap = np.vdot(product_state_vector(params), target.amplitudes)
    return float(min(1.0, abs(overlap) ** 2))


def sample_shots(probs: np.ndarray, shots: int, rng: RngStream) -> ShotRecord:
    if shots < 1:
        raise ValueError(f"shot count must be >= 1, got {shots}")
    probs = np.asarray(probs, dtype=np.float64)
    n = qubit_count(probs.shape[0])
    total = probs.sum()
    if abs(total - 1.0) > INPUT_NORM_TOLERANCE:
        raise ValueError(f"probabilities sum to {total}, expected 1")
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    counts = rng.generator.multinomial(shots, probs)
    outcomes = np.flatnonzero(counts)
    return ShotRecord(n, dict(zip(outcomes.tolist(), counts[outcomes].tolist())))


def haar_random_state(n: int, rng: RngStream) -> PureState:
    # 독립 표준 복소 가우시안 진폭을 정규화하면 Haar 분포
    if n < 1:
        raise ValueError(f"qubit count must be >= 1, got {n}")
    draws = rng.generator.standard_normal((2, 2 ** n))
    return PureState.normalized(draws[0] + 1j * draws[1])


def _check_dimensions(state: PureState, params: ProductParams) -> None:
    if state.n != params.n:
        raise DimensionMismatchError(f"state has {state.n} qubits but parameters cover {params.n}")
