import argparse
import logging
import signal
import sys
from typing import Dict, List, Optional, Sequence

import os

# 프로젝트 루트를 Python path에 추가
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import get_config
from model import EnsembleMemberError, ExperimentResult, ExperimentSpec, InvalidConfigError, NoiseModel, VqaConfig
from optim.cspsa import PRESETS, preset_gains
from service.experiment_service import ExperimentService

# 로깅 설정
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)


def _float_list(value: str) -> List[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {value!r}")


def _shot_rows(value: str) -> List[tuple]:
    """'512:8192,256:512' -> [(512, 8192), (256, 512)]"""
    rows = []
    try:
        for item in value.split(","):
            if item.strip():
                local, global_ = item.split(":")
                rows.append((int(local), int(global_)))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected local:global shot pairs, got {value!r}")
    return rows


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="qubit count")
    common.add_argument("--family", help="GHZ, W, Wtilde, GHZW or WWtilde")
    common.add_argument("--s", type=_float_list, help="superposition weight(s), comma separated")
    common.add_argument("--seed", type=int, help="base seed (fallback: GME_LAB_SEED)")
    common.add_argument("--shots-local", type=int)
    common.add_argument("--shots-global", type=int)
    common.add_argument("--iters-local", type=int)
    common.add_argument("--iters-global", type=int)
    common.add_argument("--reps", type=int, help="independent restarts per estimate")
    common.add_argument("--ensemble", type=int, help="ensemble members")
    common.add_argument("--gains", choices=sorted(PRESETS))
    common.add_argument("--gain-A", dest="gain_A", type=float, help="global-stage stability offset A")
    common.add_argument("--noise-file", help="key=value noise model file")
    common.add_argument("--shot-rows", type=_shot_rows, help="noise-study local:global shot pairs")
    common.add_argument("--jobs", type=int, help="worker threads for ensemble members")
    common.add_argument("--samples", type=int, help="property suite sample count")
    common.add_argument("--config", help="key=value experiment file (flags win)")
    common.add_argument("--out", help="output CSV path")

    parser = argparse.ArgumentParser(prog="gme-lab", description="Variational GME estimation experiments")
    subparsers = parser.add_subparsers(dest="kind", metavar="subcommand")
    subparsers.required = True
    for kind in ExperimentSpec.KINDS:
        subparsers.add_parser(kind, parents=[common])
    return parser


class Application:
    def __init__(self):
        self.config = get_config()
        logging.getLogger().setLevel(self.config.log_level)
        self.running = False

        # Experiment Service 초기화 (config 전달)
        self.experiment_service = ExperimentService(
            config=self.config,
            service_name=self.config.service_name
        )

        # 시그널 핸들러 등록
        signal.signal(signal.SIGINT, self._signal_handler)
        signal.signal(signal.SIGTERM, self._signal_handler)

    def _signal_handler(self, signum, frame):
        """시그널 핸들러"""
        logger.info(f"Received signal {signum}, shutting down...")
        self.stop()
        sys.exit(1)

    def build_spec(self, args: argparse.Namespace) -> ExperimentSpec:
        """설정 파일 값 위에 명령행 플래그를 덮어써 ExperimentSpec 생성"""
        values: Dict[str, str] = {}
        if args.config:
            values = self.config.load_experiment_file(args.config)

        def pick(flag, key: str, cast):
            if flag is not None:
                return flag
            if key in values:
                try:
                    return cast(values[key])
                except ValueError:
                    raise InvalidConfigError(f"invalid value for {key} in {args.config}: {values[key]!r}")
            return None

        vqa = VqaConfig.from_dict(values)
        gains_name = pick(args.gains, "gains", str) or "asymptotic"
        gains = preset_gains(gains_name)
        changes = {"gains_local": gains, "gains_global": gains}
        for flag, field in (
            (args.iters_local, "n_local"),
            (args.iters_global, "n_global"),
            (args.shots_local, "shots_local"),
            (args.shots_global, "shots_global"),
            (args.reps, "repetitions"),
        ):
            if flag is not None:
                changes[field] = flag

        noise_file = pick(args.noise_file, "noise_file", str)
        if noise_file:
            changes["noise"] = NoiseModel.from_dict(self.config.load_experiment_file(noise_file))
        vqa = vqa.replace(**changes)

        seed = pick(args.seed, "seed", int)
        if seed is None:
            seed = self.config.default_seed
        jobs = pick(args.jobs, "jobs", int) or self.config.jobs

        return ExperimentSpec(
            kind=args.kind,
            family=pick(args.family, "family", str),
            n=pick(args.n, "n", int),
            s_grid=pick(args.s, "s", lambda v: [float(x) for x in v.split(",") if x.strip()]),
            config=vqa,
            ensemble=pick(args.ensemble, "ensemble", int),
            out=pick(args.out, "out", str),
            seed=seed,
            jobs=jobs,
            samples=pick(args.samples, "samples", int),
            gain_A=pick(args.gain_A, "gain_a", float),
            shot_rows=pick(args.shot_rows, "shot_rows", _shot_rows),
        )

    def run(self, spec: ExperimentSpec) -> ExperimentResult:
        """실험 실행"""
        logger.info(f"Starting {self.config.service_name} - kind={spec.kind}")
        self.running = True
        try:
            return self.experiment_service.handle(spec)
        finally:
            self.stop()

    def stop(self):
        """애플리케이션 중지"""
        if not self.running:
            return
        self.running = False
        logger.info("Service stopped")


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """
    명령행 진입점

    Returns:
        0 성공, 1 속성 검사 실패 또는 실행 오류, 2 잘못된 입력 / 입출력 오류
    """
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        app = Application()
        result = app.run(app.build_spec(args))
    except (ValueError, OSError) as e:
        print(f"gme-lab: error: {e}", file=sys.stderr)
        return 2
    except EnsembleMemberError as e:
        print(f"gme-lab: error: {e}", file=sys.stderr)
        return 2 if isinstance(e.__cause__, (ValueError, OSError)) else 1
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        print(f"gme-lab: error: {e}", file=sys.stderr)
        return 1

    for line in result.lines:
        print(line)
    return result.exit_code


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
