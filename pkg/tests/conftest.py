import pytest

from curvemoduli.coeffcore import BivariatePoly, FieldSpec

QQ = FieldSpec()


def poly(text, field=QQ):
    return BivariatePoly.parse(text, field)


@pytest.fixture
def P():
    return poly


def pytest_terminal_summary(terminalreporter):
    """One pass/fail line per acceptance criterion."""
    import test_acceptance as acc

    outcomes = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            if rep.when == "call" or status == "error":
                k = int(nodeid.rsplit("_", 1)[1])
                outcomes[k] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for k, text in acc.CRITERIA.items():
        terminalreporter.write_line(f"criterion {k}: {outcomes.get(k, 'NOT RUN')}  {text}")
    for line in acc.SOFT_LOG:
        terminalreporter.write_line(f"  soft: {line}")
