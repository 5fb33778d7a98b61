import re

_RESULTS: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_c(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = m.group(1)
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _RESULTS[key] = (m.group(2), "PASS" if report.outcome == "passed" else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=int):
        name, verdict = _RESULTS[key]
        terminalreporter.write_line(f"criterion {int(key):2d} {name:<32} {verdict}")
