import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" not in props:
        return
    key = props["criterion"]
    prev = _criteria.get(key)
    failed = report.failed or (prev is not None and prev[0] == "FAIL")
    if report.when == "call" or report.failed:
        _criteria[key] = ("FAIL" if failed else "PASS", props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: int(k.split()[0])):
        status, detail = _criteria[key]
        line = f"{status}  criterion {key}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
