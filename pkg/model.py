from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np


# 정규화 허용 오차 (입력은 1e-8 이내면 조용히 재정규화)
INPUT_NORM_TOLERANCE = 1e-8
# 파라미터 2-벡터의 최소 노름
MIN_PARAM_NORM = 1e-300


class DegenerateParameterError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class InvalidConfigError(ValueError):
    pass


class OracleGuardError(ValueError):
    pass


class SingularConfusionError(ValueError):
    pass


class EnsembleMemberError(RuntimeError):
    pass


class RngStream:
    """
    (seed, stream id) 쌍으로 결정되는 난수 스트림

    child()로 겹치지 않는 하위 스트림을 만든다 (SeedSequence spawn key).
    동시에 여러 소비자가 같은 인스턴스를 공유하면 안 된다.
    """

    def __init__(self, seed: int, stream_id: int = 0, parent_key: Tuple[int, ...] = ()):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = int(seed)
        self.key = tuple(parent_key) + (int(stream_id),)
        self._generator: Optional[np.random.Generator] = None

    @property
    def stream_id(self) -> int:
        return self.key[-1]

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            sequence = np.random.SeedSequence(entropy=self.seed, spawn_key=self.key)
            self._generator = np.random.default_rng(sequence)
        return self._generator

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id, parent_key=self.key)

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, key={self.key})"


class PureState:
    """
    n 큐비트 순수 상태 (밀집 진폭 벡터)

    비트 순서: 기저 인덱스의 비트 j가 큐비트 j의 측정 결과 (LSB = 큐비트 0).
    """

    def __init__(self, n: int, amplitudes: Sequence[complex]):
        if n < 1:
            raise ValueError(f"qubit count must be >= 1, got {n}")
        vector = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        if vector.shape[0] != 2 ** n:
            raise DimensionMismatchError(
                f"expected {2 ** n} amplitudes for {n} qubits, got {vector.shape[0]}"
            )
        norm = np.linalg.norm(vector)
        if abs(norm - 1.0) > INPUT_NORM_TOLERANCE:
            raise ValueError(f"state is not normalized (norm={norm:.3e}); use PureState.normalized")
        vector = vector / norm
        vector.setflags(write=False)
        self.n = n
        self.amplitudes = vector

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex]) -> "PureState":
        vector = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        n = int(round(np.log2(vector.shape[0]))) if vector.shape[0] > 0 else 0
        if n < 1 or 2 ** n != vector.shape[0]:
            raise DimensionMismatchError(f"amplitude count {vector.shape[0]} is not a power of two >= 2")
        norm = np.linalg.norm(vector)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(n, vector / norm)

    @classmethod
    def basis(cls, n: int, index: int = 0) -> "PureState":
        vector = np.zeros(2 ** n, dtype=np.complex128)
        vector[index] = 1.0
        return cls(n, vector)

    @property
    def dimension(self) -> int:
        return 2 ** self.n

    def __repr__(self) -> str:
        return f"PureState(n={self.n})"


class ProductParams:
    """
    곱 앤자츠의 복소 파라미터 θ ∈ ℂ^{2×n}

    entries[j] = (z0_j, z1_j). 정규화는 유니터리 생성 시에만 적용하고 저장하지 않는다.
    평탄화 순서: (z0_0, z1_0, z0_1, z1_1, ...)
    """

    def __init__(self, entries: Any):
        array = np.array(entries, dtype=np.complex128)
        if array.ndim != 2 or array.shape[1] != 2 or array.shape[0] < 1:
            raise DimensionMismatchError(f"expected shape (n, 2), got {array.shape}")
        norms = np.linalg.norm(array, axis=1)
        degenerate = np.flatnonzero(norms <= MIN_PARAM_NORM)
        if degenerate.size:
            raise DegenerateParameterError(
                f"zero parameter vector for qubit(s) {degenerate.tolist()}"
            )
        array.setflags(write=False)
        self.entries = array

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, n: int) -> "ProductParams":
        entries = np.zeros((n, 2), dtype=np.complex128)
        entries[:, 0] = 1.0
        return cls(entries)

    @classmethod
    def from_flat(cls, flat: Sequence[complex]) -> "ProductParams":
        vector = np.asarray(flat, dtype=np.complex128).reshape(-1)
        if vector.shape[0] % 2:
            raise DimensionMismatchError(f"flat parameter length must be even, got {vector.shape[0]}")
        return cls(vector.reshape(-1, 2))

    @classmethod
    def random(cls, n: int, rng: RngStream) -> "ProductParams":
        # 성분마다 iid 표준 복소 가우시안
        draws = rng.generator.standard_normal((n, 2, 2))
        return cls((draws[..., 0] + 1j * draws[..., 1]) / np.sqrt(2.0))

    def flat(self) -> np.ndarray:
        return self.entries.reshape(-1).copy()

    def local_states(self) -> np.ndarray:
        """큐비트별 정규화된 국소 상태 U_j|0⟩, shape (n, 2)"""
        return self.entries / np.linalg.norm(self.entries, axis=1, keepdims=True)

    def __repr__(self) -> str:
        return f"ProductParams(n={self.n})"


class ShotRecord:
    """
    측정 결과 다중집합 (결과 정수 -> 횟수)

    결과 정수의 비트 j가 큐비트 j의 측정값이다.
    """

    def __init__(self, n: int, counts: Dict[int, int]):
        if n < 1:
            raise ValueError(f"qubit count must be >= 1, got {n}")
        clean = {}
        for outcome, count in counts.items():
            outcome = int(outcome)
            count = int(count)
            if outcome < 0 or outcome >= 2 ** n:
                raise ValueError(f"outcome {outcome} does not fit in {n} bits")
            if count < 0:
                raise ValueError(f"negative count for outcome {outcome}")
            if count:
                clean[outcome] = count
        self.n = n
        self.counts = clean
        self.total = sum(clean.values())
        self._outcomes = np.array(sorted(clean), dtype=np.int64)
        self._weights = np.array([clean[k] for k in self._outcomes], dtype=np.int64)

    def frequency(self, outcome: int) -> float:
        if self.total == 0:
            return 0.0
        return self.counts.get(outcome, 0) / self.total

    def pair_zero_frequency(self, i: int, j: int) -> float:
        """비트 i와 비트 j가 모두 0인 샷의 비율"""
        if self.total == 0:
            return 0.0
        mask = ((self._outcomes >> i) & 1 == 0) & ((self._outcomes >> j) & 1 == 0)
        return float(self._weights[mask].sum()) / self.total

    def empirical_distribution(self) -> np.ndarray:
        probs = np.zeros(2 ** self.n, dtype=np.float64)
        if self.total:
            probs[self._outcomes] = self._weights / self.total
        return probs

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "total": self.total,
            "counts": {format(k, f"0{self.n}b"): v for k, v in self.counts.items()},
        }


class PairPartition:
    """⌊n/2⌋개의 서로소 큐비트 쌍 + (n이 홀수일 때) 남는 큐비트 하나"""

    def __init__(self, n: int, pairs: Iterable[Tuple[int, int]], leftover: Optional[int] = None):
        pairs = [(int(i), int(j)) for i, j in pairs]
        used = [q for pair in pairs for q in pair]
        if leftover is not None:
            used.append(int(leftover))
        if len(pairs) != n // 2:
            raise ValueError(f"expected {n // 2} pairs for n={n}, got {len(pairs)}")
        if (leftover is None) != (n % 2 == 0):
            raise ValueError(f"leftover qubit must be present iff n is odd (n={n})")
        if sorted(used) != list(range(n)):
            raise ValueError(f"pairs {pairs} with leftover {leftover} do not cover qubits 0..{n - 1}")
        self.n = n
        self.pairs = pairs
        self.leftover = None if leftover is None else int(leftover)

    def canonical(self) -> Tuple[Tuple[Tuple[int, int], ...], Optional[int]]:
        return tuple(sorted(tuple(sorted(p)) for p in self.pairs)), self.leftover

    def __repr__(self) -> str:
        return f"PairPartition(pairs={self.pairs}, leftover={self.leftover})"


class GainSet:
    """CSPSA 게인: a_k = a/(k+1+A)^s, c_k = b/(k+1)^r"""

    def __init__(self, a: float, b: float, A: float = 0.0, s: float = 1.0, r: float = 0.166):
        if a <= 0 or b <= 0:
            raise InvalidConfigError(f"gains a and b must be positive (a={a}, b={b})")
        if not (0 < s <= 1) or not (0 < r <= 1):
            raise InvalidConfigError(f"exponents must lie in (0, 1] (s={s}, r={r})")
        if A < 0:
            raise InvalidConfigError(f"stability offset A must be >= 0, got {A}")
        self.a = float(a)
        self.b = float(b)
        self.A = float(A)
        self.s = float(s)
        self.r = float(r)

    def with_offset(self, A: float) -> "GainSet":
        return GainSet(self.a, self.b, A, self.s, self.r)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GainSet":
        return cls(
            a=float(data["a"]),
            b=float(data["b"]),
            A=float(data.get("A", 0.0)),
            s=float(data["s"]),
            r=float(data["r"]),
        )

    def to_dict(self) -> Dict[str, float]:
        return {"a": self.a, "b": self.b, "A": self.A, "s": self.s, "r": self.r}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GainSet) and self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"GainSet(a={self.a}, b={self.b}, A={self.A}, s={self.s}, r={self.r})"


class Perturbation:
    """{+1, -1, +i, -i} 성분의 섭동 벡터"""

    SYMBOLS = np.array([1.0, -1.0, 1.0j, -1.0j], dtype=np.complex128)

    def __init__(self, delta: Sequence[complex]):
        values = np.asarray(delta, dtype=np.complex128).reshape(-1)
        allowed = np.isin(values, self.SYMBOLS)
        if not allowed.all():
            raise ValueError(f"perturbation components must be in {{±1, ±i}}, got {values[~allowed][:3]}")
        values.setflags(write=False)
        self.delta = values

    def __len__(self) -> int:
        return self.delta.shape[0]

    def __getitem__(self, index: Any) -> "Perturbation":
        return Perturbation(self.delta[index])


class NoiseModel:
    """
    단순화된 파라메트릭 노이즈 모델

    depolarizing: 샷 하나가 균일 무작위 n비트 결과로 바뀔 확률
    readout: 큐비트별 (p01 = P(1 읽음 | 실제 0), p10 = P(0 읽음 | 실제 1)).
             항목이 하나면 모든 큐비트에 적용, 비어 있으면 측정 오류 없음.
    """

    def __init__(self, depolarizing: float = 0.0, readout: Optional[Sequence[Tuple[float, float]]] = None):
        readout = [(float(p01), float(p10)) for p01, p10 in (readout or [])]
        for value in [depolarizing] + [p for pair in readout for p in pair]:
            if not (0.0 <= value <= 1.0):
                raise InvalidConfigError(f"noise probabilities must lie in [0, 1], got {value}")
        self.depolarizing = float(depolarizing)
        self.readout = readout

    @classmethod
    def uniform(cls, depolarizing: float, p01: float, p10: float) -> "NoiseModel":
        return cls(depolarizing, [(p01, p10)])

    def readout_for(self, qubit: int, n: int) -> Tuple[float, float]:
        if not self.readout:
            return 0.0, 0.0
        if len(self.readout) == 1:
            return self.readout[0]
        if len(self.readout) != n:
            raise DimensionMismatchError(
                f"noise model has {len(self.readout)} readout entries but the register has {n} qubits"
            )
        return self.readout[qubit]

    def confusion_matrix(self, qubit: int, n: int) -> np.ndarray:
        # 열 = 실제 값, 행 = 읽은 값; 각 열의 합은 1
        p01, p10 = self.readout_for(qubit, n)
        return np.array([[1.0 - p01, p10], [p01, 1.0 - p10]])

    def has_readout_error(self) -> bool:
        return any(p01 or p10 for p01, p10 in self.readout)

    def is_noiseless(self) -> bool:
        return self.depolarizing == 0.0 and not self.has_readout_error()

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NoiseModel":
        """
        key=value 파일 내용으로부터 생성

        readout_p01 / readout_p10 은 단일 값 또는 쉼표로 구분된 큐비트별 값
        """
        depolarizing = float(data.get("depolarizing", 0.0) or 0.0)
        p01 = _parse_float_list(data.get("readout_p01", "0"))
        p10 = _parse_float_list(data.get("readout_p10", "0"))
        if len(p01) == 1 and len(p10) > 1:
            p01 = p01 * len(p10)
        if len(p10) == 1 and len(p01) > 1:
            p10 = p10 * len(p01)
        if len(p01) != len(p10):
            raise InvalidConfigError(
                f"readout_p01 has {len(p01)} entries but readout_p10 has {len(p10)}"
            )
        return cls(depolarizing, list(zip(p01, p10)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depolarizing": self.depolarizing,
            "readout_p01": ",".join(repr(p) for p, _ in self.readout),
            "readout_p10": ",".join(repr(p) for _, p in self.readout),
        }

    def __repr__(self) -> str:
        return f"NoiseModel(depolarizing={self.depolarizing}, readout={self.readout})"


class MitigatedDistribution:
    def __init__(self, quasi_probabilities: np.ndarray, probabilities: np.ndarray):
        self.quasi_probabilities = quasi_probabilities
        self.probabilities = probabilities


class VqaConfig:
    """VDGE / iVDGE 실행 설정"""

    MITIGATION_MODES = ("final", "none")

    def __init__(
        self,
        n_local: int = 80,
        n_global: int = 295,
        shots_local: int = 512,
        shots_global: int = 8192,
        gains_local: Optional[GainSet] = None,
        gains_global: Optional[GainSet] = None,
        repetitions: int = 5,
        seed: int = 0,
        noise: Optional[NoiseModel] = None,
        bp_threshold: float = 0.9,
        mitigation: str = "final",
        continue_counter: bool = False,
        shots_final: Optional[int] = None,
    ):
        self.n_local = int(n_local)
        self.n_global = int(n_global)
        self.shots_local = int(shots_local)
        self.shots_global = int(shots_global)
        # 기본값은 asymptotic 프리셋 (a=3, b=0.1, s=1, r=0.166)
        self.gains_local = gains_local or GainSet(3.0, 0.1, 0.0, 1.0, 0.166)
        self.gains_global = gains_global or GainSet(3.0, 0.1, 0.0, 1.0, 0.166)
        self.repetitions = int(repetitions)
        self.seed = int(seed)
        self.noise = noise
        self.bp_threshold = float(bp_threshold)
        self.mitigation = mitigation
        self.continue_counter = bool(continue_counter)
        self.shots_final = int(shots_final) if shots_final is not None else None

    @property
    def final_shots(self) -> int:
        if self.shots_final is not None:
            return self.shots_final
        return self.shots_global if self.shots_global >= 1 else self.shots_local

    @property
    def noisy(self) -> bool:
        return self.noise is not None and not self.noise.is_noiseless()

    def validate(self, method: str) -> None:
        counts = {
            "n_local": self.n_local,
            "n_global": self.n_global,
            "shots_local": self.shots_local,
            "shots_global": self.shots_global,
            "repetitions": self.repetitions,
        }
        negative = [name for name, value in counts.items() if value < 0]
        if negative:
            raise InvalidConfigError(f"counts must be >= 0: {negative}")
        if self.seed < 0:
            raise InvalidConfigError(f"seed must be >= 0, got {self.seed}")
        if not (0.0 < self.bp_threshold < 1.0):
            raise InvalidConfigError(f"bp_threshold must lie in (0, 1), got {self.bp_threshold}")
        if self.mitigation not in self.MITIGATION_MODES:
            raise InvalidConfigError(f"mitigation must be one of {self.MITIGATION_MODES}, got {self.mitigation}")
        if method == "vdge":
            if self.n_global < 1:
                raise InvalidConfigError("VDGE needs n_global >= 1")
        elif method == "ivdge":
            if self.n_local < 1:
                raise InvalidConfigError("iVDGE needs n_local >= 1")
            if self.shots_local < 1:
                raise InvalidConfigError("iVDGE needs shots_local >= 1")
        else:
            raise InvalidConfigError(f"unknown method: {method}")
        if self.n_global > 0 and self.shots_global < 1:
            raise InvalidConfigError("global stage needs shots_global >= 1")
        if self.noisy and self.final_shots < 1:
            raise InvalidConfigError("noisy runs need at least one final shot")

    def replace(self, **changes: Any) -> "VqaConfig":
        values = dict(self.__dict__)
        values.update(changes)
        return VqaConfig(**values)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base: Optional["VqaConfig"] = None) -> "VqaConfig":
        """key=value 설정 (문자열 값 허용). 지정되지 않은 키는 base 값을 유지"""
        config = base or cls()
        changes: Dict[str, Any] = {}
        for key in ("n_local", "n_global", "shots_local", "shots_global", "repetitions", "seed", "shots_final"):
            if data.get(key) not in (None, ""):
                changes[key] = int(data[key])
        if data.get("bp_threshold") not in (None, ""):
            changes["bp_threshold"] = float(data["bp_threshold"])
        if data.get("mitigation") not in (None, ""):
            changes["mitigation"] = str(data["mitigation"])
        if data.get("continue_counter") not in (None, ""):
            changes["continue_counter"] = str(data["continue_counter"]).lower() in ("1", "true", "yes")
        return config.replace(**changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_local": self.n_local,
            "n_global": self.n_global,
            "shots_local": self.shots_local,
            "shots_global": self.shots_global,
            "gains_local": self.gains_local.to_dict(),
            "gains_global": self.gains_global.to_dict(),
            "repetitions": self.repetitions,
            "seed": self.seed,
            "noise": self.noise.to_dict() if self.noise else None,
            "bp_threshold": self.bp_threshold,
            "mitigation": self.mitigation,
            "continue_counter": self.continue_counter,
            "shots_final": self.shots_final,
        }


class TraceRecord:
    def __init__(self, iteration: int, stage: str, cost_sampled: float, infidelity_exact: float, cum_shots: int):
        self.iteration = iteration
        self.stage = stage
        self.cost_sampled = cost_sampled
        self.infidelity_exact = infidelity_exact
        self.cum_shots = cum_shots

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "stage": self.stage,
            "cost_sampled": self.cost_sampled,
            "infidelity_exact": self.infidelity_exact,
            "cum_shots": self.cum_shots,
        }


class RunTrace:
    """최적화 한 번의 반복별 기록"""

    def __init__(self, method: str, n: int):
        self.method = method
        self.n = n
        self.records: List[TraceRecord] = []
        self.final_params: Optional[ProductParams] = None
        self.final_estimate: Optional[float] = None

    @property
    def cum_shots(self) -> int:
        return self.records[-1].cum_shots if self.records else 0

    def append(self, stage: str, cost_sampled: float, infidelity_exact: float, shots: int) -> TraceRecord:
        record = TraceRecord(
            iteration=len(self.records) + 1,
            stage=stage,
            cost_sampled=float(cost_sampled),
            infidelity_exact=float(infidelity_exact),
            cum_shots=self.cum_shots + int(shots),
        )
        self.records.append(record)
        return record

    def exact_curve(self) -> np.ndarray:
        return np.array([r.infidelity_exact for r in self.records])

    def shot_axis(self) -> np.ndarray:
        return np.array([r.cum_shots for r in self.records], dtype=np.int64)


class GmeEstimate:
    def __init__(self, value: float, best_rep: int, traces: List[RunTrace], bp_flag: bool):
        self.value = value
        self.best_rep = best_rep
        self.traces = traces
        self.bp_flag = bp_flag

    @property
    def best_trace(self) -> RunTrace:
        return self.traces[self.best_rep]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "bestRep": self.best_rep,
            "bpFlag": self.bp_flag,
            "repetitionValues": [t.final_estimate for t in self.traces],
        }


class ExperimentSpec:
    KINDS = (
        "vdge",
        "ivdge",
        "sweep-s",
        "noise-study",
        "bounds-check",
        "estimator-check",
        "spectrum-check",
        "gradient-check",
        "mitigation-check",
        "exact-gme",
        "random-benchmark",
    )
    STOCHASTIC_KINDS = (
        "vdge",
        "ivdge",
        "sweep-s",
        "noise-study",
        "random-benchmark",
        "bounds-check",
        "estimator-check",
        "gradient-check",
        "mitigation-check",
    )

    def __init__(
        self,
        kind: str,
        family: Optional[str] = None,
        n: Optional[int] = None,
        s_grid: Optional[List[float]] = None,
        config: Optional[VqaConfig] = None,
        ensemble: Optional[int] = None,
        out: Optional[str] = None,
        seed: Optional[int] = None,
        jobs: int = 1,
        samples: Optional[int] = None,
        gain_A: Optional[float] = None,
        shot_rows: Optional[List[Tuple[int, int]]] = None,
    ):
        if kind not in self.KINDS:
            raise InvalidConfigError(f"unknown experiment kind: {kind}")
        self.kind = kind
        self.family = family
        self.n = n
        self.s_grid = list(s_grid) if s_grid else []
        self.config = config or VqaConfig()
        self.ensemble = ensemble
        self.out = out
        self.seed = seed
        self.jobs = max(1, int(jobs))
        self.samples = samples
        self.gain_A = gain_A
        self.shot_rows = shot_rows

    @property
    def stochastic(self) -> bool:
        return self.kind in self.STOCHASTIC_KINDS

    def validate(self) -> None:
        if self.stochastic and self.seed is None:
            raise InvalidConfigError(f"--seed is required for '{self.kind}' (or set GME_LAB_SEED)")
        if self.ensemble is not None and self.ensemble < 1:
            raise InvalidConfigError(f"ensemble must be >= 1, got {self.ensemble}")
        if self.n is not None and self.n < 1:
            raise InvalidConfigError(f"n must be >= 1, got {self.n}")
        for s in self.s_grid:
            if not (0.0 <= s <= 1.0):
                raise InvalidConfigError(f"s values must lie in [0, 1], got {s}")


class SummaryRow:
    def __init__(self, x: float, median: float, q1: float, q3: float, bp_pct: Optional[float] = None):
        self.x = x
        self.median = median
        self.q1 = q1
        self.q3 = q3
        self.bp_pct = bp_pct


class EnsembleSummary:
    """
    시리즈(vdge, ivdge, oracle 등)별 중앙값/사분위 요약

    finals: 시리즈별 멤버 최종값 (정렬 전, 멤버 인덱스 순)
    """

    def __init__(self, label: str, with_bp: bool = False):
        self.label = label
        self.with_bp = with_bp
        self.series: Dict[str, List[SummaryRow]] = {}
        self.finals: Dict[str, List[float]] = {}

    def add_row(self, series: str, row: SummaryRow) -> None:
        self.series.setdefault(series, []).append(row)

    def rows(self, series: str) -> List[SummaryRow]:
        return self.series.get(series, [])


def _parse_float_list(value: Any) -> List[float]:
    if isinstance(value, (int, float)):
        return [float(value)]
    items = [item.strip() for item in str(value).split(",") if item.strip()]
    return [float(item) for item in items] or [0.0]


class CheckResult:
    """속성 검사 한 건: margin >= 0 이면 통과"""

    def __init__(self, suite: str, check: str, n: int, margin: float, detail: str = ""):
        self.suite = suite
        self.check = check
        self.n = n
        self.margin = float(margin)
        self.detail = detail

    @property
    def passed(self) -> bool:
        return self.margin >= 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "check": self.check,
            "n": self.n,
            "passed": self.passed,
            "margin": self.margin,
            "detail": self.detail,
        }


class SuiteReport:
    def __init__(self, suite: str, checks: Optional[List[CheckResult]] = None):
        self.suite = suite
        self.checks: List[CheckResult] = list(checks or [])

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, check: str, n: int, margin: float, detail: str = "") -> CheckResult:
        result = CheckResult(self.suite, check, n, margin, detail)
        self.checks.append(result)
        return result

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


class ExperimentResult:
    """실행 결과: 종료 코드, 표준 출력 줄, 기록한 파일"""

    def __init__(self, exit_code: int = 0, lines: Optional[List[str]] = None, written: Optional[List[str]] = None):
        self.exit_code = exit_code
        self.lines: List[str] = list(lines or [])
        self.written: List[str] = list(written or [])
