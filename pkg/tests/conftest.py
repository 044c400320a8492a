import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from powergraph_lab.families import build, parse_family  # noqa: E402


@pytest.fixture(scope="session")
def grp():
    cache = {}

    def get(text: str):
        if text not in cache:
            cache[text] = build(parse_family(text), validate=True)
        return cache[text]

    return get


@pytest.fixture
def fallback(monkeypatch):
    """Force the pure-numpy kernels for the duration of a test."""
    monkeypatch.setenv("POWERGRAPH_LAB_NO_NUMBA", "1")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = sorted(getattr(mod, "ACCEPTANCE_LINES", []), key=lambda s: int(s.split()[1].rstrip("]")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
