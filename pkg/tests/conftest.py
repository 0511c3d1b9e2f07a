import pytest

CRITERIA = {
    1: "ChangeCase golden report",
    2: "vacuous contract scores",
    3: "graduated score table",
    4: "strengthening monotonicity",
    5: "mutant pool sizes",
    6: "parser roundtrip",
    7: "agent determinism and soundness",
    8: "mini-benchmark VR/MVR golden",
    9: "external verifier integration",
}

_outcomes = {}


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    if report.when == "call" or report.outcome in ("failed", "skipped"):
        _outcomes.setdefault(marks, []).append((report.outcome, report.longreprtext if report.skipped else ""))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep.criterion = m.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, name in CRITERIA.items():
        results = _outcomes.get(n)
        if not results:
            continue
        kinds = {k for k, _ in results}
        if "failed" in kinds:
            verdict = "FAIL"
        elif kinds == {"skipped"}:
            reason = results[0][1].rsplit("Skipped: ", 1)[-1].strip().rstrip("')")
            verdict = f"SKIP ({reason})"
        else:
            verdict = "PASS"
        tr.write_line(f"criterion {n} {verdict}: {name}")
