import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def gate(request):
    """``gate(n, ok, detail)`` records one acceptance line and echoes it live."""
    lines = request.config.__dict__.setdefault("_acceptance_lines", {})
    reporter = request.config.pluginmanager.get_plugin("terminalreporter")

    def record(n: int, ok: bool, detail: str):
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines[n] = line
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.__dict__.get("_acceptance_lines")
    if lines:
        terminalreporter.section("acceptance gate")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
