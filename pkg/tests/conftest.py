import re

import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def acceptance_line(request):
    """Record one summary line; all lines are printed at the end of the run."""

    def record(text):
        print(text)
        request.config.stash[_LINES_KEY].append(text)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_LINES_KEY]
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(re.match(r"criterion (\d+)", s).group(1))):
            terminalreporter.write_line(line)
