import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# One line per end-to-end gate check, echoed after the run so the verdicts
# are visible without -s (see test_acceptance.py).
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance results")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
