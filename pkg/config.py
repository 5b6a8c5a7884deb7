import logging
import os
from typing import Dict, Optional

from dotenv import dotenv_values, load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)


class Config:
    def __init__(self):
        # 서비스 설정
        self.service_name = os.getenv("SERVICE_NAME", "gme-lab")
        self.log_level = os.getenv("LOG_LEVEL", "INFO").upper()

        # 시드 fallback (--seed 가 없을 때 사용)
        seed = os.getenv("GME_LAB_SEED")
        self.default_seed: Optional[int] = None
        if seed not in (None, ""):
            try:
                self.default_seed = int(seed)
            except ValueError:
                logger.warning(f"Ignoring non-integer GME_LAB_SEED={seed!r}")

        # 워커 수 (앙상블 멤버 병렬 실행)
        self.jobs = int(os.getenv("GME_LAB_JOBS", "1"))

        # exact_gme_product 비용 가드 (2^n 상태벡터)
        self.oracle_max_qubits = int(os.getenv("GME_LAB_ORACLE_MAX_QUBITS", "12"))

    def load_experiment_file(self, path: str) -> Dict[str, str]:
        """
        key=value 형식의 실험 설정 파일 읽기

        Args:
            path: 설정 파일 경로

        Returns:
            키 -> 문자열 값 딕셔너리 (빈 값은 제외)
        """
        if not os.path.isfile(path):
            raise FileNotFoundError(f"config file not found: {path}")
        values = dotenv_values(path)
        loaded = {key.strip().lower(): value for key, value in values.items() if value not in (None, "")}
        logger.info(f"Experiment file loaded - path={path}, keys={sorted(loaded)}")
        return loaded


def get_config() -> Config:
    return Config()
