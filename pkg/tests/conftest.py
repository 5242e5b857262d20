"""Shared test wiring: the end-of-run acceptance summary section.

Acceptance tests register one human-readable pass/fail line each; the
terminal-summary hook replays them after capture ends so the ledger is
visible in ordinary pytest output.
"""

SUMMARY_LINES = []


def record_summary(line: str) -> None:
    SUMMARY_LINES.append(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not SUMMARY_LINES:
        return
    terminalreporter.section("acceptance summary")
    for line in SUMMARY_LINES:
        terminalreporter.write_line(line)
