from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("default")

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report: pytest.TestReport) -> None:
    marker = "test_acceptance.py::test_criterion_"
    if marker not in report.nodeid:
        return
    name = report.nodeid.split(marker, 1)[1]
    number = int(name.split("_", 1)[0])
    failed = report.failed or (report.when == "call" and report.skipped)
    previous = _CRITERIA.get(number, (name, "PASS"))[1]
    if report.when == "call" or failed:
        _CRITERIA[number] = (name, "FAIL" if failed or previous == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter) -> None:
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        name, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {name}")
