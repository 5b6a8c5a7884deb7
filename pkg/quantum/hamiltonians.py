from itertools import combinations
from math import comb
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from model import (
    DimensionMismatchError,
    NoiseModel,
    PairPartition,
    ProductParams,
    PureState,
    RngStream,
    ShotRecord,
)
from quantum.noise import corrupt_distribution
from quantum.statevector import (
    apply_product_unitary_dagger,
    basis_bits,
    fidelity_exact,
    probabilities,
    qubit_count,
    sample_shots,
)


# 상한 샌드위치 검사 허용 오차
BOUNDS_TOLERANCE = 1e-9


class SpectrumEntry:
    def __init__(self, k: int, eigenvalue: float, multiplicity: int):
        self.k = k
        self.eigenvalue = eigenvalue
        self.multiplicity = multiplicity

    def __repr__(self) -> str:
        return f"SpectrumEntry(k={self.k}, eigenvalue={self.eigenvalue}, multiplicity={self.multiplicity})"


class BoundsReport:
    def __init__(self, n: int, hl_value: float, global_value: float):
        self.n = n
        self.hl_value = hl_value
        self.lower = hl_value
        # 상한 계수는 n/2 (⌊n/2⌋ 로 두면 홀수 n 에서 W(3) 이 상한을 넘는다)
        self.upper = (n / 2.0) * hl_value
        self.global_value = global_value

    def holds(self, tolerance: float = BOUNDS_TOLERANCE) -> bool:
        return self.lower <= self.global_value + tolerance and self.global_value <= self.upper + tolerance

    def to_dict(self):
        return {
            "hlValue": self.hl_value,
            "lower": self.lower,
            "upper": self.upper,
            "global": self.global_value,
        }


def ansatz_distribution(target: PureState, params: ProductParams, noise: Optional[NoiseModel] = None) -> np.ndarray:
    probs = probabilities(apply_product_unitary_dagger(target, params))
    if noise is not None and not noise.is_noiseless():
        probs = corrupt_distribution(probs, noise)
    return probs


def measure_ansatz(
    target: PureState,
    params: ProductParams,
    shots: int,
    rng: RngStream,
    noise: Optional[NoiseModel] = None,
) -> ShotRecord:
    """U†(θ)|Ψ⟩ 를 계산 기저에서 전체 레지스터 측정 (샷 S 회)"""
    return sample_shots(ansatz_distribution(target, params, noise), shots, rng)


def global_infidelity_exact(target: PureState, params: ProductParams) -> float:
    return 1.0 - fidelity_exact(target, params)


def global_infidelity_sampled(
    target: PureState,
    params: ProductParams,
    shots: int,
    rng: RngStream,
    noise: Optional[NoiseModel] = None,
) -> float:
    record = measure_ansatz(target, params, shots, rng, noise)
    return 1.0 - record.frequency(0)


def pair_zero_marginals(probs: np.ndarray) -> np.ndarray:
    """
    모든 큐비트 쌍의 P(bit i = 0 ∧ bit j = 0)

    Returns:
        shape (n, n) 대칭 행렬 (대각 = P(bit i = 0))
    """
    probs = np.asarray(probs, dtype=np.float64)
    n = qubit_count(probs.shape[0])
    zeros = 1.0 - basis_bits(n).astype(np.float64)
    return zeros.T @ (zeros * probs[:, None])


def local_infidelity_exact(target: PureState, params: ProductParams, i: int, j: int) -> float:
    """I_ij = 1 - Tr(ρ_ij Π_ij); Π_ij 는 측정 기저에서 대각이므로 주변 확률로 계산"""
    if i == j:
        raise ValueError(f"local infidelity needs two distinct qubits, got ({i}, {j})")
    if not (0 <= i < target.n and 0 <= j < target.n):
        raise DimensionMismatchError(f"qubits ({i}, {j}) out of range for n={target.n}")
    probs = probabilities(apply_product_unitary_dagger(target, params))
    bits = basis_bits(target.n)
    mask = (bits[:, i] == 0) & (bits[:, j] == 0)
    return float(1.0 - probs[mask].sum())


def _mean_pair_infidelity(marginals: np.ndarray) -> float:
    n = marginals.shape[0]
    upper = marginals[np.triu_indices(n, k=1)]
    return float(np.mean(1.0 - upper))


def expected_HL_exact(target: PureState, params: ProductParams) -> float:
    """⟨H_L⟩_θ = (2/(n(n-1))) Σ_{i<j} I_ij"""
    if target.n < 2:
        raise ValueError(f"the local Hamiltonian needs n >= 2, got {target.n}")
    probs = probabilities(apply_product_unitary_dagger(target, params))
    return _mean_pair_infidelity(pair_zero_marginals(probs))


def infidelity_bounds(target: PureState, params: ProductParams) -> BoundsReport:
    hl_value = expected_HL_exact(target, params)
    return BoundsReport(target.n, hl_value, global_infidelity_exact(target, params))


def sample_partition(n: int, rng: RngStream) -> PairPartition:
    """균일 셔플 후 연속 원소끼리 짝짓기 (완전/준완전 매칭 위에서 균일)"""
    if n < 2:
        raise ValueError(f"a pair partition needs n >= 2, got {n}")
    order = rng.generator.permutation(n).tolist()
    pairs = [(order[2 * k], order[2 * k + 1]) for k in range(n // 2)]
    leftover = order[-1] if n % 2 else None
    return PairPartition(n, pairs, leftover)


def enumerate_partitions(n: int) -> Iterator[PairPartition]:
    """모든 완전 매칭(짝수 n) 또는 남는 큐비트 하나를 가진 준완전 매칭(홀수 n)"""
    if n < 2:
        raise ValueError(f"a pair partition needs n >= 2, got {n}")

    def matchings(qubits: Tuple[int, ...]) -> Iterator[List[Tuple[int, int]]]:
        if not qubits:
            yield []
            return
        first, rest = qubits[0], qubits[1:]
        for index, partner in enumerate(rest):
            remaining = rest[:index] + rest[index + 1:]
            for tail in matchings(remaining):
                yield [(first, partner)] + tail

    everyone = tuple(range(n))
    if n % 2 == 0:
        for pairs in matchings(everyone):
            yield PairPartition(n, pairs)
    else:
        for leftover in everyone:
            others = tuple(q for q in everyone if q != leftover)
            for pairs in matchings(others):
                yield PairPartition(n, pairs, leftover)


def pair_infidelities(record: ShotRecord, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """같은 샷 기록에서 쌍별 경험적 국소 비충실도 1 - freq(bit_i = 0 ∧ bit_j = 0)"""
    return np.array([1.0 - record.pair_zero_frequency(i, j) for i, j in pairs])


def xg_estimate(
    target: PureState,
    params: ProductParams,
    partition: PairPartition,
    shots: int,
    rng: RngStream,
    noise: Optional[NoiseModel] = None,
) -> float:
    """
    X_g = (1/⌊n/2⌋) Σ_{(i,j)∈g} I_ij

    모든 쌍이 하나의 ShotRecord 를 공유한다 (국소 측정은 병렬 수행 가능).
    """
    record = measure_ansatz(target, params, shots, rng, noise)
    return float(np.mean(pair_infidelities(record, partition.pairs)))


def xg_from_marginals(marginals: np.ndarray, partition: PairPartition) -> float:
    return float(np.mean([1.0 - marginals[i, j] for i, j in partition.pairs]))


def hl_from_record(record: ShotRecord) -> float:
    """전체 레지스터 샷 하나로 모든 쌍을 평균한 ⟨H_L⟩ 추정"""
    return _mean_pair_infidelity(pair_zero_marginals(record.empirical_distribution()))


def xg_mse_bound(n: int, hl_value: float) -> float:
    """MSE(X_g) ≤ 2/n + ((n-1)/((n-2)(n-3)) - 2/n)·⟨H_L⟩²"""
    if n < 4:
        raise ValueError(f"the X_g mean-square-error bound is defined for n >= 4, got {n}")
    return 2.0 / n + ((n - 1) / ((n - 2) * (n - 3)) - 2.0 / n) * hl_value ** 2


def hl_spectrum(n: int) -> List[SpectrumEntry]:
    """
    H_L 의 스펙트럼 (계산 기저에서 대각)

    해밍 무게 k 의 고유값 1 - (n-k)(n-k-1)/(n(n-1)), 중복도 C(n, k)
    """
    if n < 2:
        raise ValueError(f"the local Hamiltonian needs n >= 2, got {n}")
    return [
        SpectrumEntry(k, 1.0 - (n - k) * (n - k - 1) / (n * (n - 1)), comb(n, k))
        for k in range(n + 1)
    ]


def assemble_hl_diagonal(n: int) -> np.ndarray:
    """H_L = (2/(n(n-1))) Σ_{i<j} (1 - Π_ij) 의 대각 성분을 쌍 사영자로부터 직접 조립"""
    if n < 2:
        raise ValueError(f"the local Hamiltonian needs n >= 2, got {n}")
    bits = basis_bits(n)
    diagonal = np.zeros(2 ** n)
    for i, j in combinations(range(n), 2):
        projector = ((bits[:, i] == 0) & (bits[:, j] == 0)).astype(np.float64)
        diagonal += 1.0 - projector
    return diagonal * 2.0 / (n * (n - 1))


def interpolated_cost(
    target: PureState,
    params: ProductParams,
    lam: float,
    exact: bool = True,
    shots: Optional[int] = None,
    rng: Optional[RngStream] = None,
    noise: Optional[NoiseModel] = None,
) -> float:
    """(1-λ)⟨H_L⟩ + λ⟨H_G⟩; 샘플링 모드에서는 두 항을 같은 샷 기록에서 추정"""
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"interpolation weight must lie in [0, 1], got {lam}")
    if exact:
        return (1.0 - lam) * expected_HL_exact(target, params) + lam * global_infidelity_exact(target, params)
    if shots is None or rng is None:
        raise ValueError("sampled interpolated cost needs shots and rng")
    record = measure_ansatz(target, params, shots, rng, noise)
    return (1.0 - lam) * hl_from_record(record) + lam * (1.0 - record.frequency(0))
