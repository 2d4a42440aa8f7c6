"""Collect the acceptance verdict lines and print them after the run."""

import re

_LINES = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _LINES.extend(value for key, value in report.user_properties if key == "acceptance")


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: (int(re.match(r"\d+", s.split()[1]).group()), s)):
            terminalreporter.write_line(line)
