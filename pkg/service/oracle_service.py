import logging
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import basinhopping, minimize

from model import InvalidConfigError, OracleGuardError, PureState, RngStream
from quantum.statevector import basis_bits

logger = logging.getLogger(__name__)

FAMILIES = ("GHZ", "W", "Wtilde", "GHZW", "WWtilde")
SUPERPOSITION_FAMILIES = ("GHZW", "WWtilde")
DEFAULT_ORACLE_MAX_QUBITS = 12
# basin hopping 한 번의 무작위 이동 폭 (각도, 라디안)
HOP_STEPSIZE = 0.5
# 비용 [0, 1] 척도에 맞춘 Metropolis 온도
HOP_TEMPERATURE = 0.05


def normalize_family(family: str) -> str:
    lookup = {name.lower(): name for name in FAMILIES}
    name = lookup.get(str(family).lower())
    if name is None:
        raise InvalidConfigError(f"unknown state family: {family} (expected one of {FAMILIES})")
    return name


def _weight_state(n: int, weight: int) -> np.ndarray:
    mask = basis_bits(n).sum(axis=1) == weight
    vector = mask.astype(np.complex128)
    return vector / np.sqrt(mask.sum())


def make_named_state(family: str, n: int, s: Optional[float] = None) -> PureState:
    """
    GHZ / W / W̃ 및 그 중첩 상태 생성

    Args:
        family: GHZ, W, Wtilde, GHZW, WWtilde
        n: 큐비트 수 (>= 2)
        s: 중첩 계수 (GHZW, WWtilde 에서 필수)

    Returns:
        정규화된 상태벡터
    """
    family = normalize_family(family)
    if n < 2:
        raise InvalidConfigError(f"named states need n >= 2, got {n}")

    ghz = np.zeros(2 ** n, dtype=np.complex128)
    ghz[0] = ghz[-1] = 1.0 / np.sqrt(2.0)
    w = _weight_state(n, 1)
    w_tilde = _weight_state(n, n - 1)

    if family == "GHZ":
        return PureState(n, ghz)
    if family == "W":
        return PureState(n, w)
    if family == "Wtilde":
        return PureState(n, w_tilde)

    if s is None or not (0.0 <= s <= 1.0):
        raise InvalidConfigError(f"{family} needs s in [0, 1], got {s}")
    first, second = (ghz, w) if family == "GHZW" else (w, w_tilde)
    overlap = abs(np.vdot(first, second))
    if overlap > 1e-12:
        # n = 2 에서 W̃ = W
        logger.debug(f"Non-orthogonal components for {family}(n={n}) - overlap={overlap:.3f}, renormalizing")
    return PureState.normalized(np.sqrt(s) * first + np.sqrt(1.0 - s) * second)


def _product_cost_factory(target: PureState):
    n = target.n
    bits = basis_bits(n).astype(np.float64)
    conj_psi = np.conj(target.amplitudes)
    ones = np.ones((bits.shape[0], 1), dtype=np.complex128)

    def cost_and_grad(x: np.ndarray) -> Tuple[float, np.ndarray]:
        theta, phi = x[:n], x[n:]
        cos, sin, phase = np.cos(theta), np.sin(theta), np.exp(1j * phi)
        factors = np.where(bits > 0, (phase * sin)[None, :], cos[None, :].astype(np.complex128))
        # 큐비트 i 를 제외한 인자 곱 = 접두 곱 x 접미 곱
        left = np.hstack([ones, np.cumprod(factors[:, :-1], axis=1)])
        right = np.hstack([np.cumprod(factors[:, ::-1], axis=1)[:, ::-1][:, 1:], ones])
        full = left[:, -1] * factors[:, -1]
        overlap = conj_psi @ full

        environment = conj_psi[:, None] * left * right
        env1 = (environment * bits).sum(axis=0)
        env0 = environment.sum(axis=0) - env1
        d_theta = -sin * env0 + phase * cos * env1
        d_phi = 1j * phase * sin * env1

        value = 1.0 - abs(overlap) ** 2
        grad = -2.0 * np.real(np.conj(overlap) * np.concatenate([d_theta, d_phi]))
        return value, grad

    return cost_and_grad


def exact_gme_product(
    target: PureState,
    restarts: int = 20,
    hops: int = 10,
    rng: Optional[RngStream] = None,
    max_qubits: int = DEFAULT_ORACLE_MAX_QUBITS,
) -> float:
    """
    완전 곱 앤자츠 |Φ_i⟩ = cos θ_i|0⟩ + e^{iφ_i} sin θ_i|1⟩ 에 대한 basin hopping

    재시작마다 무작위 각도에서 scipy basinhopping 을 hops 회 돌리고,
    국소 최소화는 해석적 그래디언트 BFGS 로 한다. 재시작 중 최솟값을 돌려준다.
    """
    if target.n > max_qubits:
        raise OracleGuardError(
            f"exact_gme_product is limited to {max_qubits} qubits (got {target.n}); "
            "raise GME_LAB_ORACLE_MAX_QUBITS or use the symmetric oracle"
        )
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    if hops < 0:
        raise ValueError(f"hops must be >= 0, got {hops}")
    rng = rng or RngStream(0)
    generator = rng.generator
    n = target.n
    cost_and_grad = _product_cost_factory(target)
    minimizer_kwargs = {"method": "BFGS", "jac": True, "options": {"gtol": 1e-10, "maxiter": 2000}}

    best = np.inf
    for restart in range(restarts):
        x0 = np.concatenate([generator.uniform(0.0, np.pi, n), generator.uniform(0.0, 2.0 * np.pi, n)])
        result = basinhopping(
            cost_and_grad,
            x0,
            niter=hops,
            T=HOP_TEMPERATURE,
            stepsize=HOP_STEPSIZE,
            minimizer_kwargs=minimizer_kwargs,
            seed=generator,
        )
        value = float(result.fun)
        logger.debug(f"Product oracle restart {restart} - value={value:.12f}, hops={hops}")
        best = min(best, value)
    return float(min(1.0, max(0.0, best)))


def _symmetric_overlap(family: str, n: int, s: float, theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """⟨Ψ|Φ^⊗n⟩ 폐형식 (상태 노름으로 나눔)"""
    cos, sin, phase = np.cos(theta), np.sin(theta), np.exp(1j * phi)
    w = np.sqrt(n) * cos ** (n - 1) * sin * phase
    if family == "GHZW":
        ghz = (cos ** n + phase ** n * sin ** n) / np.sqrt(2.0)
        return np.sqrt(s) * ghz + np.sqrt(1.0 - s) * w
    w_tilde = np.sqrt(n) * cos * sin ** (n - 1) * phase ** (n - 1)
    # n = 2 에서 ⟨W|W̃⟩ = 1
    cross = 1.0 if n == 2 else 0.0
    norm = np.sqrt(1.0 + 2.0 * np.sqrt(s * (1.0 - s)) * cross)
    return (np.sqrt(s) * w + np.sqrt(1.0 - s) * w_tilde) / norm


def exact_gme_symmetric(
    family: str,
    n: int,
    s: float,
    restarts: int = 20,
    rng: Optional[RngStream] = None,
) -> float:
    """
    대칭 분리 상태 |Φ⟩^⊗n 두 파라미터 (θ, φ) 에 대한 최소화

    거친 격자 탐색 후 상위 격자점과 무작위 시작점에서 Nelder-Mead 로 다듬는다.
    """
    family = normalize_family(family)
    if family == "GHZ":
        family, s = "GHZW", 1.0
    elif family == "W":
        family, s = "GHZW", 0.0
    elif family == "Wtilde":
        family, s = "WWtilde", 0.0
    if s is None or not (0.0 <= s <= 1.0):
        raise InvalidConfigError(f"s must lie in [0, 1], got {s}")
    if n < 2:
        raise InvalidConfigError(f"symmetric oracle needs n >= 2, got {n}")
    rng = rng or RngStream(0)

    def cost(x: np.ndarray) -> float:
        return float(1.0 - abs(_symmetric_overlap(family, n, s, x[0], x[1])) ** 2)

    thetas, phis = np.meshgrid(
        np.linspace(0.0, np.pi / 2.0, 61),
        np.linspace(0.0, 2.0 * np.pi, 120, endpoint=False),
        indexing="ij",
    )
    grid = 1.0 - np.abs(_symmetric_overlap(family, n, s, thetas, phis)) ** 2
    order = np.argsort(grid, axis=None, kind="stable")
    grid_starts = min(5, restarts)
    starts = [np.array([thetas.flat[i], phis.flat[i]]) for i in order[:grid_starts]]
    for _ in range(restarts - grid_starts):
        starts.append(np.array([rng.generator.uniform(0.0, np.pi / 2.0), rng.generator.uniform(0.0, 2.0 * np.pi)]))

    best = float(grid.flat[order[0]])
    for x0 in starts:
        result = minimize(
            cost,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000},
        )
        best = min(best, float(result.fun))
    return float(min(1.0, max(0.0, best)))
