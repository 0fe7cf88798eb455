import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Append one acceptance line; it is echoed in the terminal summary."""
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
