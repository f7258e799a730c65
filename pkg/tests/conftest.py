from collections import defaultdict

import pytest

_OUTCOMES = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        expected_failure = hasattr(report, "wasxfail")
        _OUTCOMES[marker.args[0]].append(report.passed or (report.skipped and expected_failure))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_OUTCOMES):
        verdict = "PASS" if all(_OUTCOMES[k]) else "FAIL"
        terminalreporter.write_line(f"criterion {k}: {verdict}")
