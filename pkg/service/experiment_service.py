import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

import sys
import os

# 프로젝트 루트를 Python path에 추가
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from model import (
    EnsembleSummary,
    ExperimentResult,
    ExperimentSpec,
    InvalidConfigError,
    PureState,
    RngStream,
    VqaConfig,
)
from quantum.hamiltonians import hl_spectrum
from quantum.noise import default_noise_model
from quantum.statevector import haar_random_state
from service.gme_service import best_of_repetitions, classify_bp, run_ivdge, run_vdge
from service.oracle_service import (
    DEFAULT_ORACLE_MAX_QUBITS,
    SUPERPOSITION_FAMILIES,
    exact_gme_product,
    exact_gme_symmetric,
    make_named_state,
    normalize_family,
)
from service.property_suites import SUITES, run_property_suites
from service.report_writer import format_float, summary_row, write_csv
from worker.pool import EnsemblePool

logger = logging.getLogger(__name__)

# 무작위 상태 벤치마크의 큐비트 수별 전역 단계 A
RANDOM_BENCHMARK_GAIN_A = {3: 32.0, 4: 16.0, 5: 8.0, 6: 4.0}
SWEEP_GAIN_A = 4.0
NOISE_STUDY_GAIN_A = 8.0

DEFAULT_ENSEMBLE = {
    "random-benchmark": 20,
    "sweep-s": 10,
    "noise-study": 100,
}
DEFAULT_S_GRID = [0.0, 0.25, 0.5, 0.75, 1.0]

# 노이즈 연구 표 구성: VDGE 전역 샷 / iVDGE (국소, 전역) 샷
NOISE_STUDY_ITERATIONS = 200
NOISE_STUDY_LOCAL_ITERATIONS = 80
NOISE_STUDY_GLOBAL_SHOTS = [8192, 4096, 2048, 1024, 512, 256, 130]
NOISE_STUDY_SHOT_ROWS = [(512, 8192), (512, 4096), (512, 2048), (512, 1024), (256, 512), (128, 256), (64, 128)]

# 앙상블 멤버 하위 스트림 번호
STATE_STREAM, ORACLE_STREAM, VDGE_STREAM, IVDGE_STREAM = 0, 1, 2, 3


def matched_global_iterations(config: VqaConfig) -> int:
    """
    iVDGE 와 총 샷 수가 같아지는 VDGE 반복 수

    N_G + ceil(N_L·S_L / S_G); 기본 설정에서 295 + 5 = 300
    """
    if config.shots_global < 1:
        raise InvalidConfigError("matching budgets needs shots_global >= 1")
    local_shots = config.n_local * config.shots_local
    extra = math.ceil(local_shots / config.shots_global)
    if local_shots % config.shots_global:
        logger.warning(
            f"Budget mismatch - localShots={local_shots} is not a multiple of shotsGlobal={config.shots_global}, "
            f"VDGE gets {extra} extra iterations"
        )
    return config.n_global + extra


def noise_study_configs(
    base: VqaConfig,
    shot_rows: Optional[Sequence[Tuple[int, int]]] = None,
    gain_A: float = NOISE_STUDY_GAIN_A,
) -> List[Tuple[VqaConfig, VqaConfig]]:
    """
    노이즈 연구 표의 행별 (VDGE, iVDGE) 설정

    VDGE 는 행의 전역 샷으로 200 회, iVDGE 는 국소 80 회 후 총 샷이 같도록
    200 - ceil(80·S_L/S_G) 회의 전역 반복을 수행한다. 행마다 단일 실행이다.
    """
    if shot_rows is None:
        vdge_shots = NOISE_STUDY_GLOBAL_SHOTS
        shot_rows = NOISE_STUDY_SHOT_ROWS
    else:
        vdge_shots = [global_shots for _, global_shots in shot_rows]
    gains_global = base.gains_global.with_offset(gain_A)
    gains_local = base.gains_local.with_offset(0.0)

    rows = []
    for vdge_global, (local_shots, global_shots) in zip(vdge_shots, shot_rows):
        n_global = NOISE_STUDY_ITERATIONS - math.ceil(NOISE_STUDY_LOCAL_ITERATIONS * local_shots / global_shots)
        if n_global < 0:
            raise InvalidConfigError(f"shot row ({local_shots}, {global_shots}) leaves no global iterations")
        vdge = base.replace(
            n_local=0,
            n_global=NOISE_STUDY_ITERATIONS,
            shots_global=vdge_global,
            gains_global=gains_global,
            repetitions=1,
        )
        ivdge = base.replace(
            n_local=NOISE_STUDY_LOCAL_ITERATIONS,
            n_global=n_global,
            shots_local=local_shots,
            shots_global=global_shots,
            gains_local=gains_local,
            gains_global=gains_global,
            repetitions=1,
        )
        rows.append((vdge, ivdge))
    return rows


def _exact_curve_error(estimate, oracle_value: float) -> Tuple[np.ndarray, np.ndarray]:
    """반복마다 반복실행 최솟값의 정확한 진단값과 E 의 차이, x = 누적 샷"""
    curves = np.array([trace.exact_curve() for trace in estimate.traces])
    best = curves.min(axis=0)
    return estimate.best_trace.shot_axis(), np.abs(oracle_value - best)


def _ensemble_size(spec: ExperimentSpec) -> int:
    return spec.ensemble if spec.ensemble is not None else DEFAULT_ENSEMBLE[spec.kind]


def run_random_benchmark(spec: ExperimentSpec, max_qubits: int = DEFAULT_ORACLE_MAX_QUBITS) -> EnsembleSummary:
    """
    Haar 무작위 상태 앙상블에서 VDGE / iVDGE 수렴 비교

    두 방법은 같은 총 샷 수를 쓴다. 시리즈 vdge, ivdge: x = 누적 샷, 값 = |E - 최솟값 진단|.
    """
    n = spec.n
    if n is None or n < 2:
        raise InvalidConfigError(f"random-benchmark needs n >= 2, got {n}")
    gain_A = spec.gain_A if spec.gain_A is not None else RANDOM_BENCHMARK_GAIN_A.get(n)
    if gain_A is None:
        raise InvalidConfigError(f"no default gain A for n={n}; pass --gain-A")
    ensemble = _ensemble_size(spec)
    base = spec.config.replace(
        seed=spec.seed,
        gains_local=spec.config.gains_local.with_offset(0.0),
        gains_global=spec.config.gains_global.with_offset(gain_A),
    )
    ivdge_config = base
    vdge_config = base.replace(n_local=0, n_global=matched_global_iterations(base))
    root = RngStream(spec.seed)

    logger.info(
        f"Random benchmark started - n={n}, ensemble={ensemble}, gainA={gain_A}, "
        f"vdgeIterations={vdge_config.n_global}, jobs={spec.jobs}"
    )

    def member(index: int) -> Dict[str, Any]:
        stream = root.child(index)
        target = haar_random_state(n, stream.child(STATE_STREAM))
        oracle = exact_gme_product(target, rng=stream.child(ORACLE_STREAM), max_qubits=max_qubits)
        result = {"oracle": oracle}
        for method, config, sub in (("vdge", vdge_config, VDGE_STREAM), ("ivdge", ivdge_config, IVDGE_STREAM)):
            estimate = best_of_repetitions(target, config, method, rng=stream.child(sub))
            shots, errors = _exact_curve_error(estimate, oracle)
            result[method] = {"shots": shots, "errors": errors, "final": abs(oracle - estimate.value)}
        logger.info(
            f"Member {index} done - oracle={oracle:.6f}, "
            f"vdgeError={result['vdge']['final']:.3e}, ivdgeError={result['ivdge']['final']:.3e}"
        )
        return result

    members = EnsemblePool(spec.jobs, name="random-benchmark").map(member, range(ensemble))

    summary = EnsembleSummary("random-benchmark")
    for method in ("vdge", "ivdge"):
        shots = members[0][method]["shots"]
        errors = np.array([m[method]["errors"] for m in members])
        for column, x in enumerate(shots):
            summary.add_row(method, summary_row(float(x), errors[:, column]))
        summary.finals[method] = [m[method]["final"] for m in members]
    summary.finals["oracle"] = [m["oracle"] for m in members]
    return summary


def run_sweep_s(spec: ExperimentSpec) -> EnsembleSummary:
    """
    GHZW / WWtilde 중첩 계수 s 격자에서 대칭 오라클 대비 VDGE / iVDGE

    시리즈 oracle, vdge, ivdge (Ê) 와 vdge_error, ivdge_error (|E - Ê|), x = s
    """
    family = normalize_family(spec.family or "GHZW")
    if family not in SUPERPOSITION_FAMILIES:
        raise InvalidConfigError(f"sweep-s needs a superposition family {SUPERPOSITION_FAMILIES}, got {family}")
    n = spec.n if spec.n is not None else 18
    s_grid = spec.s_grid or DEFAULT_S_GRID
    ensemble = _ensemble_size(spec)
    gain_A = spec.gain_A if spec.gain_A is not None else SWEEP_GAIN_A
    base = spec.config.replace(
        seed=spec.seed,
        gains_local=spec.config.gains_local.with_offset(0.0),
        gains_global=spec.config.gains_global.with_offset(gain_A),
    )
    configs = {"vdge": base.replace(n_local=0, n_global=matched_global_iterations(base)), "ivdge": base}
    root = RngStream(spec.seed)
    pool = EnsemblePool(spec.jobs, name="sweep-s")

    summary = EnsembleSummary("sweep-s", with_bp=True)
    for s_index, s in enumerate(s_grid):
        target = make_named_state(family, n, s)
        oracle = exact_gme_symmetric(family, n, s, rng=root.child(s_index).child(ORACLE_STREAM))
        logger.info(f"Sweep point started - family={family}, n={n}, s={s}, oracle={oracle:.6f}")

        def member(index: int) -> Dict[str, float]:
            stream = root.child(s_index).child(1000 + index)
            return {
                "vdge": best_of_repetitions(target, configs["vdge"], "vdge", rng=stream.child(VDGE_STREAM)).value,
                "ivdge": best_of_repetitions(target, configs["ivdge"], "ivdge", rng=stream.child(IVDGE_STREAM)).value,
            }

        members = pool.map(member, range(ensemble))
        summary.add_row("oracle", summary_row(s, [oracle], [classify_bp(oracle, base.bp_threshold)]))
        for method in ("vdge", "ivdge"):
            values = [m[method] for m in members]
            flags = [classify_bp(v, base.bp_threshold) for v in values]
            summary.add_row(method, summary_row(s, values, flags))
            summary.add_row(f"{method}_error", summary_row(s, [abs(oracle - v) for v in values], flags))
            summary.finals.setdefault(method, []).extend(values)
        summary.finals.setdefault("oracle", []).append(oracle)
    return summary


def run_noise_study(spec: ExperimentSpec) -> EnsembleSummary:
    """
    노이즈 하의 barren plateau 빈도 (GHZ(7) 기본)

    행마다 멤버당 단일 실행. 시리즈 vdge, ivdge: x = 전역 샷, 중앙값 GME, bp_pct
    """
    family = normalize_family(spec.family or "GHZ")
    n = spec.n if spec.n is not None else 7
    s = spec.s_grid[0] if spec.s_grid else None
    target = make_named_state(family, n, s)
    noise = spec.config.noise
    if noise is None:
        noise = default_noise_model()
        logger.info(f"Noise study uses the default noise model - {noise}")
    ensemble = _ensemble_size(spec)
    gain_A = spec.gain_A if spec.gain_A is not None else NOISE_STUDY_GAIN_A
    rows = noise_study_configs(spec.config.replace(seed=spec.seed, noise=noise), spec.shot_rows, gain_A)
    root = RngStream(spec.seed)
    pool = EnsemblePool(spec.jobs, name="noise-study")

    summary = EnsembleSummary("noise-study", with_bp=True)
    for row_index, (vdge_config, ivdge_config) in enumerate(rows):

        def member(index: int) -> Dict[str, float]:
            stream = root.child(row_index).child(index)
            return {
                "vdge": run_vdge(target, vdge_config, stream.child(VDGE_STREAM)).final_estimate,
                "ivdge": run_ivdge(target, ivdge_config, stream.child(IVDGE_STREAM)).final_estimate,
            }

        members = pool.map(member, range(ensemble))
        for method, config in (("vdge", vdge_config), ("ivdge", ivdge_config)):
            values = [m[method] for m in members]
            row = summary_row(config.shots_global, values, [classify_bp(v, config.bp_threshold) for v in values])
            summary.add_row(method, row)
            summary.finals.setdefault(method, []).extend(values)
            logger.info(
                f"Noise row done - method={method}, shotsLocal={config.shots_local}, "
                f"shotsGlobal={config.shots_global}, medianGme={row.median:.4f}, bpPct={row.bp_pct:.1f}"
            )
    return summary


class ExperimentService:
    """실험 종류별 실행기 디스패치"""

    def __init__(self, config, service_name: str):
        self.config = config
        self.service_name = service_name

    def handle(self, spec: ExperimentSpec) -> ExperimentResult:
        """
        실험 처리 메인 핸들러

        Args:
            spec: 검증할 실험 명세

        Returns:
            ExperimentResult (종료 코드, 출력 줄, 기록한 파일)
        """
        spec.validate()
        logger.info(
            f"Handling experiment - kind={spec.kind}, family={spec.family}, n={spec.n}, "
            f"seed={spec.seed}, jobs={spec.jobs}, out={spec.out}"
        )

        handler_map = {
            "vdge": self._handle_single_run,
            "ivdge": self._handle_single_run,
            "random-benchmark": self._handle_summary,
            "sweep-s": self._handle_summary,
            "noise-study": self._handle_summary,
            "exact-gme": self._handle_exact_gme,
        }
        for kind in SUITES:
            handler_map[kind] = self._handle_property_suite

        handler = handler_map.get(spec.kind)
        if handler is None:
            raise InvalidConfigError(f"unknown experiment kind: {spec.kind}")
        try:
            return handler(spec)
        except Exception as e:
            logger.error(f"Error handling experiment {spec.kind} - error={e}", exc_info=True)
            raise

    def _target(self, spec: ExperimentSpec) -> PureState:
        if spec.n is None:
            raise InvalidConfigError(f"{spec.kind} needs --n")
        if spec.family is None:
            # 상태군이 없으면 시드로부터 Haar 무작위 상태
            return haar_random_state(spec.n, RngStream(spec.seed).child(STATE_STREAM))
        s = spec.s_grid[0] if spec.s_grid else None
        return make_named_state(spec.family, spec.n, s)

    def _handle_single_run(self, spec: ExperimentSpec) -> ExperimentResult:
        config = spec.config.replace(seed=spec.seed)
        if spec.gain_A is not None:
            config = config.replace(gains_global=config.gains_global.with_offset(spec.gain_A))
        estimate = best_of_repetitions(self._target(spec), config, spec.kind, jobs=spec.jobs)
        result = ExperimentResult(lines=[format_float(estimate.value)])
        if spec.out:
            result.written = write_csv(estimate.best_trace, spec.out)
        logger.info(
            f"{spec.kind} finished - estimate={estimate.value:.6f}, bestRep={estimate.best_rep}, "
            f"bpFlag={estimate.bp_flag}"
        )
        return result

    def _handle_summary(self, spec: ExperimentSpec) -> ExperimentResult:
        if spec.kind == "random-benchmark":
            summary = run_random_benchmark(spec, max_qubits=self.config.oracle_max_qubits)
        elif spec.kind == "sweep-s":
            summary = run_sweep_s(spec)
        else:
            summary = run_noise_study(spec)

        result = ExperimentResult()
        for series, values in summary.finals.items():
            if not values:
                continue
            row = summary_row(0.0, values)
            result.lines.append(
                f"{series},{format_float(row.median)},{format_float(row.q1)},{format_float(row.q3)}"
            )
        if spec.out:
            result.written = write_csv(summary, spec.out)
        return result

    def _handle_exact_gme(self, spec: ExperimentSpec) -> ExperimentResult:
        if spec.family is None or spec.n is None:
            raise InvalidConfigError("exact-gme needs --family and --n")
        family = normalize_family(spec.family)
        s = spec.s_grid[0] if spec.s_grid else None
        rng = RngStream(spec.seed if spec.seed is not None else 0)
        if spec.n <= self.config.oracle_max_qubits:
            value = exact_gme_product(make_named_state(family, spec.n, s), rng=rng, max_qubits=self.config.oracle_max_qubits)
            oracle = "product"
        else:
            value = exact_gme_symmetric(family, spec.n, s, rng=rng)
            oracle = "symmetric"
        logger.info(f"Exact GME - family={family}, n={spec.n}, s={s}, oracle={oracle}, value={value:.12f}")
        result = ExperimentResult(lines=[format_float(value)])
        if spec.out:
            with open(spec.out, "w", encoding="utf-8", newline="") as handle:
                handle.write("family,n,s,oracle,value\n")
                handle.write(f"{family},{spec.n},{'' if s is None else format_float(s)},{oracle},{format_float(value)}\n")
            result.written = [spec.out]
        return result

    def _handle_property_suite(self, spec: ExperimentSpec) -> ExperimentResult:
        result = ExperimentResult()
        if spec.kind == "spectrum-check":
            sizes = [spec.n] if spec.n is not None else list(range(2, 9))
            result.lines.append("n,k,eigenvalue,multiplicity")
            for n in sizes:
                for entry in hl_spectrum(n):
                    result.lines.append(f"{n},{entry.k},{format_float(entry.eigenvalue)},{entry.multiplicity}")

        reports = run_property_suites(spec)
        table = ["suite,check,n,passed,margin"]
        for report in reports:
            for check in report.checks:
                table.append(
                    f"{check.suite},{check.check},{check.n},{str(check.passed).lower()},{format_float(check.margin)}"
                )
        result.lines.extend(table)
        if spec.out:
            with open(spec.out, "w", encoding="utf-8", newline="") as handle:
                handle.write("\n".join(table) + "\n")
            result.written = [spec.out]
        result.exit_code = 0 if all(report.passed for report in reports) else 1
        return result
