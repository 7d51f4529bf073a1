"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""

import pytest

_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    limit = marker.kwargs.get("limit")
    if report.when == "call" or (report.when == "setup" and report.failed):
        _RESULTS[label] = (report.passed, report.duration, limit)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label, (passed, duration, limit) in _RESULTS.items():
        verdict = "PASS" if passed else "FAIL"
        bound = f" (bound {limit} s)" if limit is not None else ""
        terminalreporter.write_line(f"{verdict}  {label}  {duration:.2f} s{bound}")
