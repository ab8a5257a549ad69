import pytest

from eitsim import reference_params

ACCEPTANCE_LINES = []


@pytest.fixture
def params():
    return reference_params()


@pytest.fixture
def record():
    """Append a one-line PASS/FAIL verdict for the terminal summary."""

    def _record(criterion, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}")
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
