import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qlocal.protocols import registry  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def cached_outcome(name: str, **params):
    """Exact outcome of a registered bundle, computed once per session."""
    return registry.build(name, **params).outcome()


@pytest.fixture(scope="session")
def outcome_of():
    return cached_outcome


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
