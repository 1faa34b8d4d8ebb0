import re
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"

_criteria: dict[int, tuple[str, str]] = {}


@pytest.fixture
def data_dir():
    return DATA


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_c(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    num, name = int(m.group(1)), m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        # a setup/teardown failure also sinks the criterion
        prev = _criteria.get(num, (name, "PASS"))[1]
        status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _criteria[num] = (name, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        name, status = _criteria[num]
        terminalreporter.write_line(f"criterion {num:2d}: {status}  {name}")
