from fractions import Fraction

import pytest

from promise_lab.problems import LThetaProblem

_CRITERIA: dict[int, dict] = {}


@pytest.fixture
def theta_problem():
    return LThetaProblem.from_sines(Fraction(3, 5), Fraction(5, 13))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    n, text = marker.args
    entry = _CRITERIA.setdefault(n, {"text": text, "ok": True, "notes": []})
    if report.outcome == "passed" and not hasattr(report, "wasxfail"):
        return
    entry["ok"] = False
    if hasattr(report, "wasxfail"):
        entry["notes"].append(f"{item.name}: {report.wasxfail}")
    else:
        entry["notes"].append(f"{item.name}: {report.outcome}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        status = "PASS" if entry["ok"] else "FAIL"
        line = f"criterion {n:>2}: {status}  {entry['text']}"
        if entry["notes"]:
            line += "  [" + "; ".join(entry["notes"]) + "]"
        terminalreporter.write_line(line)
