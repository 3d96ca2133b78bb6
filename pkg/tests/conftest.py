import random

import pytest

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""
    def record(number, title):
        _ACCEPTANCE[request.node.nodeid] = (number, title)
    return record


def pytest_runtest_logreport(report):
    if report.when == "call" and report.nodeid in _ACCEPTANCE:
        number, title = _ACCEPTANCE[report.nodeid]
        _ACCEPTANCE[report.nodeid] = (number, title, report.passed)


def pytest_terminal_summary(terminalreporter):
    rows = [v for v in _ACCEPTANCE.values() if len(v) == 3]
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed in sorted(rows, key=lambda r: (r[0], r[1])):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}")
