import pytest

from eit2des.model import SystemParams

ACCEPTANCE_LINES = []


@pytest.fixture
def fig3():
    return SystemParams()


@pytest.fixture
def report():
    def _report(criterion, ok, detail=""):
        ACCEPTANCE_LINES.append((criterion, ok, detail))
        return ok
    return _report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(ACCEPTANCE_LINES, key=lambda x: x[0]):
        terminalreporter.write_line(f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
