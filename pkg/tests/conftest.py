import pytest

VERDICT_LINES = []


@pytest.fixture
def report():
    """Record acceptance verdict lines; they are echoed in the terminal summary."""

    def add(line: str) -> None:
        print(line)
        VERDICT_LINES.append(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if VERDICT_LINES:
        terminalreporter.section("acceptance verdicts")
        for line in VERDICT_LINES:
            terminalreporter.write_line(line)
