import math
import os

import pytest
from hypothesis import HealthCheck, settings

from xlink.radio import MMWAVE, SUBTHZ

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(k, passed, detail)``; returns ``passed``."""

    def record(k: int, passed: bool, detail: str) -> bool:
        _ACCEPTANCE[k] = (bool(passed), detail)
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def mm5():
    return MMWAVE.config(math.radians(5.0))


@pytest.fixture
def mm10():
    return MMWAVE.config(math.radians(10.0))


@pytest.fixture
def thz1():
    return SUBTHZ.config(math.radians(1.0))
