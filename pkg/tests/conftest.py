import os

import pytest
from hypothesis import settings

os.environ.setdefault("CDTORUS_SEED", "20261018")

settings.register_profile("cdtorus", derandomize=True, deadline=None, max_examples=60)
settings.load_profile("cdtorus")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def seed() -> int:
    return int(os.environ["CDTORUS_SEED"])


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
