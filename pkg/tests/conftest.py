import pytest

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: dict = {}


@pytest.fixture
def criterion():
    def record(number, title, checks):
        """checks: list of (label, ok).  Records the line and returns overall pass."""
        bad = [label for label, ok in checks if not ok]
        status = "PASS" if not bad else "FAIL"
        line = f"criterion {number} ({title}): {status} [{len(checks) - len(bad)}/{len(checks)} checks]"
        if bad:
            line += " failing: " + "; ".join(bad)
        ACCEPTANCE_LINES[number] = line
        print(line)
        return not bad

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
