import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from visync.automata import Dfa, Dvpda  # noqa: E402

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def make_m1(**overrides) -> Dvpda:
    tables = dict(
        stack=("BOT", "X"),
        calls={"a": [(1, "X"), (1, "X")]},
        ints={"b": [1, 0]},
        rets={"d": [{"BOT": 0, "X": 0}, {"BOT": 1, "X": 0}]},
    )
    tables.update(overrides)
    return Dvpda.from_tables(2, **tables)


def identity_dvpda(n=2) -> Dvpda:
    return Dvpda.from_tables(
        n,
        stack=("BOT", "X"),
        calls={"a": [(q, "X") for q in range(n)]},
        ints={"b": list(range(n))},
        rets={"d": [[q, q] for q in range(n)]},
    )


def identity_dfa(n=2) -> Dfa:
    return Dfa.from_tables(n, {"x": list(range(n)), "y": list(range(n))})


@pytest.fixture
def m1() -> Dvpda:
    return make_m1()


@pytest.fixture
def fixtures_dir() -> str:
    return FIXTURES


ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {name}: {detail}")
