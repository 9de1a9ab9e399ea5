"""Shared pytest plumbing.

The acceptance tests record one verdict line per criterion; printing them from
inside the tests would hide the lines for passing tests under output capture,
so they are replayed in the terminal summary instead.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
