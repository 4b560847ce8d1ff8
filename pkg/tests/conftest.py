"""Shared test plumbing: the acceptance-criteria report."""
import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance_report():
    """Record one pass/fail line per acceptance criterion.

    The lines come out in the terminal summary so a plain pytest run
    shows the verdict for every criterion at a glance.
    """

    def report(number: int, name: str, ok: bool, extra: str = ""):
        status = "PASS" if ok else "FAIL"
        _LINES.append(f"criterion {number:>2}  {name}: {status}{extra}")

    return report


def pytest_terminal_summary(terminalreporter, exitstatus):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
