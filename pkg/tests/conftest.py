"""Shared pytest fixtures and the acceptance-criterion summary hook.

Acceptance tests record one line per criterion through the
``criterion_report`` fixture; the collected lines are printed as a
dedicated section at the end of the pytest run so the final verdict for
every criterion is visible in one place regardless of how verbose the
run was.
"""
import pytest

_CRITERION_LINES: list[tuple[int, bool, str]] = []


@pytest.fixture
def criterion_report():
    """Return a recorder: ``record(number, passed, detail)``.

    Each call stores one acceptance-criterion verdict for the
    end-of-run summary section. Recording does not assert anything by
    itself; the test still fails normally on its own asserts.
    """

    def record(number: int, passed: bool, detail: str) -> None:
        _CRITERION_LINES.append((int(number), bool(passed), str(detail)))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_CRITERION_LINES):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict} - {detail}")
