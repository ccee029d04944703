import sys
import mpmath
import pytest
from hypothesis import HealthCheck, settings

# fixed-seed property runs
settings.register_profile(
    "kapteyn",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("kapteyn")


@pytest.fixture
def mp30():
    with mpmath.workdps(30):
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
