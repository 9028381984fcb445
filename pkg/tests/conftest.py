"""Shared pytest wiring for the acceptance suite.

Acceptance tests record exactly one verdict line each through the
``criterion`` fixture; the lines are echoed in a dedicated section after the
run so they survive output capture.  If a test crashes before recording, a
FAIL line is synthesized from its ``criterion`` marker so every criterion
always reports.
"""

from __future__ import annotations

import pytest

_LINES: list[str] = []


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line(
        "markers", "criterion(n): acceptance criterion number for the verdict line"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    setattr(item, "_report_" + report.when, report)


@pytest.fixture
def criterion(request: pytest.FixtureRequest):
    recorded: list[str] = []

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:02d} {'PASS' if ok else 'FAIL'}: {detail}"
        recorded.append(line)
        _LINES.append(line)
        print(line)
        assert ok, line

    yield record

    if recorded:
        return
    marker = request.node.get_closest_marker("criterion")
    report = getattr(request.node, "_report_call", None)
    if marker is not None and report is not None and report.failed:
        _LINES.append(
            f"criterion {marker.args[0]:02d} FAIL: crashed before recording a verdict"
        )


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_LINES):
        terminalreporter.write_line(line)
