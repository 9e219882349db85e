"""Runs of a DVPDA from every start state, synchronization checks, turn counting."""
from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .automata import BOTTOM, Dvpda, Kind


class SyncModel(enum.Enum):
    EMPTY = "empty"
    SAME = "same"
    ARBITRARY = "arbitrary"

    @classmethod
    def parse(cls, text: str | SyncModel) -> SyncModel:
        if isinstance(text, cls):
            return text
        key = text.strip().lower()
        if key in ("arb", "arbitrary"):
            return cls.ARBITRARY
        return cls(key)


class Sign(enum.Enum):
    UP = 1
    DOWN = -1


@dataclass(frozen=True)
class Config:
    state: int
    stack: tuple[int, ...] = (BOTTOM,)


@dataclass(frozen=True)
class GlobalConfig:
    per_start: tuple[Config, ...]
    turns_so_far: int = 0
    last_sign: Sign | None = None


def height_delta(m: Dvpda, letter: int, top: int) -> int:
    kind = m.kinds[letter]
    if kind is Kind.CALL:
        return 1
    if kind is Kind.RET and top != BOTTOM:
        return -1
    return 0


def advance_turns(turns: int, last: Sign | None, delta: int) -> tuple[int, Sign | None]:
    """Fold one height change into the (turns, last nonzero direction) pair."""
    if delta == 0:
        return turns, last
    sign = Sign.UP if delta > 0 else Sign.DOWN
    if last is not None and sign is not last:
        turns += 1
    return turns, sign


def _step(m: Dvpda, state: int, stack: tuple[int, ...], a: int) -> tuple[int, tuple[int, ...]]:
    kind = m.kinds[a]
    row = m.table[a]
    if kind is Kind.CALL:
        t, g = row[state]
        return t, stack + (g,)
    if kind is Kind.INT:
        return row[state], stack
    top = stack[-1]
    t = row[state][top]
    return t, (stack if top == BOTTOM else stack[:-1])


def step(m: Dvpda, c: Config, letter: str | int) -> Config:
    a = m.alphabet.resolve(letter)
    return Config(*_step(m, c.state, c.stack, a))


def run(m: Dvpda, q: int, word: Iterable[str | int]) -> Config:
    state, stack = q, (BOTTOM,)
    for a in m.encode(word):
        state, stack = _step(m, state, stack, a)
    return Config(state, stack)


def simulate_all(m: Dvpda, word: Iterable[str | int]) -> GlobalConfig:
    states = list(range(m.n_states))
    stacks = [(BOTTOM,)] * m.n_states
    turns, last = 0, None
    for a in m.encode(word):
        # heights are uniform, so run 0 decides the height change
        turns, last = advance_turns(turns, last, height_delta(m, a, stacks[0][-1]))
        for i in range(m.n_states):
            states[i], stacks[i] = _step(m, states[i], stacks[i], a)
    return GlobalConfig(tuple(Config(q, s) for q, s in zip(states, stacks)), turns, last)


def is_synchronized(g: GlobalConfig, model: SyncModel | str) -> bool:
    model = SyncModel.parse(model)
    first = g.per_start[0]
    if any(c.state != first.state for c in g.per_start):
        return False
    if model is SyncModel.ARBITRARY:
        return True
    if model is SyncModel.SAME:
        return all(c.stack == first.stack for c in g.per_start)
    return all(c.stack == (BOTTOM,) for c in g.per_start)


def check_witness(
    m: Dvpda, word: Sequence[str | int], model: SyncModel | str, turn_bound: int | None = None
) -> bool:
    g = simulate_all(m, word)
    if turn_bound is not None and g.turns_so_far > turn_bound:
        return False
    return is_synchronized(g, model)


def turns_of(m: Dvpda, word: Iterable[str | int]) -> int:
    return simulate_all(m, word).turns_so_far
