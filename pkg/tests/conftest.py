import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    mark = item.get_closest_marker("criterion")
    if mark and report.when == "call":
        n, title = mark.args
        _CRITERIA[n] = ("PASS" if report.passed else "FAIL", title, report.duration)
    return report


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict, title, secs = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {title} ({secs:.1f} s)")
