import re

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        props = dict(report.user_properties)
        _ACCEPTANCE.append((report.nodeid, report.outcome, props))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome, props in sorted(_ACCEPTANCE, key=lambda r: int(re.search(r"_(\d+)_", r[0]).group(1))):
        num = re.search(r"test_criterion_(\d+)_(\w+)", nodeid)
        label = num.group(2).replace("_", " ")
        status = "PASS" if outcome == "passed" else "FAIL"
        timing = props.get("timing", "")
        terminalreporter.write_line(f"criterion {num.group(1)} [{status}] {label} {timing}".rstrip())
