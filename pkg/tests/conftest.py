import pytest

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    def _record(criterion: int, passed: bool, detail: str = ""):
        # parametrized criteria accumulate: all cases must pass
        if criterion in ACCEPTANCE:
            ok, prev = ACCEPTANCE[criterion]
            passed, detail = ok and passed, f"{prev}; {detail}"
        ACCEPTANCE[criterion] = (bool(passed), detail)
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
