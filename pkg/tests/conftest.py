import os
import tempfile

import pytest

# keep the on-disk table cache away from the user's home during tests
os.environ.setdefault("KLRPBW_CACHE", tempfile.mkdtemp(prefix="klrpbw-cache-"))

from klrpbw.pbw import build_table  # noqa: E402
from klrpbw.rootsys import hmm_order, named_type  # noqa: E402

ACCEPTANCE_LINES: list[str] = []

_TABLES: dict = {}


def hmm_table(name: str):
    """(cartan, order, good words, complete cuspidal table) for the HMM order, memoized."""
    if name not in _TABLES:
        C = named_type(name)
        order, words = hmm_order(C)
        _TABLES[name] = (C, order, words, build_table(order))
    return _TABLES[name]


@pytest.fixture
def table():
    return hmm_table


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
