import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_criteria = {}
_items = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            num, title = m.args
            _items[item.nodeid] = num
            _criteria.setdefault(num, {"title": title, "outcomes": [], "seconds": 0.0})


def pytest_runtest_logreport(report):
    num = _items.get(report.nodeid)
    if num is None:
        return
    entry = _criteria[num]
    if report.when == "call" or report.outcome != "passed":
        entry["outcomes"].append(report.outcome)
    if report.when == "call":
        entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        entry = _criteria[num]
        outcomes = entry["outcomes"]
        if not outcomes:
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"AC{num:<2} {status:<7} {entry['title']} ({entry['seconds']:.2f} s)")


@pytest.fixture
def timer():
    start = time.perf_counter()

    def elapsed():
        return time.perf_counter() - start

    return elapsed
