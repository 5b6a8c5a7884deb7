import os
import sys

import pytest

# 프로젝트 루트를 Python path에 추가
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from model import RngStream  # noqa: E402


@pytest.fixture
def rng():
    return RngStream(1234)
