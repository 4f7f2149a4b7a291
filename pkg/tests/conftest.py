import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from recurwalk.laws import bundled_laws, simple_walk  # noqa: E402

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def laws():
    return bundled_laws()


@pytest.fixture(scope="session")
def simple():
    return simple_walk()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
