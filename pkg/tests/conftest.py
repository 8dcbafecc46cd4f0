import os

import mpmath
import pytest
from hypothesis import HealthCheck, settings

mpmath.mp.dps = 30

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def close(a, b, rel=1e-12, abs_=0.0):
    a, b = complex(a), complex(b)
    return abs(a - b) <= max(rel * max(abs(a), abs(b)), abs_)


@pytest.fixture
def approx():
    return close


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES[number] = f"AC{number:<2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
