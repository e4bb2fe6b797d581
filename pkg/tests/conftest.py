import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_criterion_"):
        return
    if report.when == "call" or report.failed:
        num = int(name.split("_")[2])
        prev = _CRITERIA.get(num, True)
        _CRITERIA[num] = prev and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    from test_acceptance import TITLES
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        mark = "PASS" if _CRITERIA[num] else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {mark}  {TITLES[num]}")
