"""Bounded brute-force search for shortest synchronizing words.

Breadth-first search over global configurations: the tuple of current
states of all runs and their stacks. Heights are uniform across runs, so
the stacks are stored as a single stack of *levels*, each level being the
tuple of symbols the runs pushed at that height. Levels are interned into a
tree so that pushing and popping are constant time and a whole stack is
identified by one integer.

This module deliberately shares no code with the decision procedures; it
only reads the transition tables.
"""
from __future__ import annotations

import enum
from collections.abc import Iterable
from dataclasses import dataclass

from .automata import BOTTOM, Dvpda, Kind
from .semantics import SyncModel

DEFAULT_LIMIT = 12
DEFAULT_BUDGET = 5_000_000


class Outcome(enum.Enum):
    FOUND = "found"
    NONE_WITHIN = "none-within"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class OracleResult:
    outcome: Outcome
    word: tuple[str, ...] | None
    limit: int
    explored: int

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.FOUND


class _Stacks:
    """Interned stacks of levels; node 0 holds only the bottom symbol."""

    def __init__(self):
        self.parent = [-1]
        self.level: list = [None]
        self.uniform = [True]  # every level so far equal across runs
        self._ids: dict = {}

    def push(self, node: int, level: tuple) -> int:
        key = (node, level)
        found = self._ids.get(key)
        if found is not None:
            return found
        new = len(self.parent)
        self._ids[key] = new
        self.parent.append(node)
        self.level.append(level)
        first = level[0]
        self.uniform.append(self.uniform[node] and all(g == first for g in level))
        return new


def _search(m: Dvpda, models: list[SyncModel], max_turns: int | None, bounds: list,
            limit: int, budget: int) -> dict:
    """One BFS answering every ``(model, bound)`` combination at once.

    With ``max_turns`` set, keys carry the turn count and the last nonzero
    direction; a node with ``t`` turns is a candidate for every bound ``>= t``.
    Because turns never decrease, restricting this search to nodes with at
    most ``k`` turns reproduces the search for bound ``k`` exactly.
    """
    table, kinds = m.table, m.kinds
    track = max_turns is not None
    stacks = _Stacks()
    states0 = tuple(range(m.n_states))
    start = (states0, 0, 0, 0) if track else (states0, 0)
    parent: dict = {start: None}
    results: dict = {}
    wanted = [(model, b) for model in models for b in bounds]

    def satisfied(states, node, model):
        first = states[0]
        for s in states:
            if s != first:
                return False
        if model is SyncModel.ARBITRARY:
            return True
        if model is SyncModel.SAME:
            return stacks.uniform[node]
        return node == 0

    def word_of(key):
        letters = []
        while parent[key] is not None:
            key, a = parent[key]
            letters.append(a)
        return m.decode(reversed(letters))

    def record(key, turns):
        states, node = key[0], key[1]
        for model, bound in wanted:
            if (model, bound) in results:
                continue
            if bound is not None and turns > bound:
                continue
            if satisfied(states, node, model):
                results[model, bound] = OracleResult(Outcome.FOUND, word_of(key), limit, len(parent))

    record(start, 0)
    frontier = [start]
    depth = 0
    while frontier and depth < limit and len(results) < len(wanted):
        depth += 1
        nxt = []
        for key in frontier:
            states, node = key[0], key[1]
            for a, kind in enumerate(kinds):
                row = table[a]
                if kind is Kind.CALL:
                    moves = [row[q] for q in states]
                    new_states = tuple(x for x, _ in moves)
                    new_node = stacks.push(node, tuple(g for _, g in moves))
                    delta = 1
                elif kind is Kind.INT:
                    new_states = tuple(row[q] for q in states)
                    new_node, delta = node, 0
                elif node == 0:
                    new_states = tuple(row[q][BOTTOM] for q in states)
                    new_node, delta = node, 0
                else:
                    new_states = tuple(row[q][g] for q, g in zip(states, stacks.level[node]))
                    new_node, delta = stacks.parent[node], -1
                if track:
                    turns, sign = key[2], key[3]
                    if delta:
                        if sign and sign != delta:
                            turns += 1
                            if turns > max_turns:
                                continue
                        sign = delta
                    new_key = (new_states, new_node, turns, sign)
                else:
                    turns = 0
                    new_key = (new_states, new_node)
                if new_key in parent:
                    continue
                parent[new_key] = (key, a)
                if len(parent) > budget:
                    for combo in wanted:
                        results.setdefault(
                            combo, OracleResult(Outcome.BUDGET_EXCEEDED, None, limit, len(parent)))
                    return results
                record(new_key, turns)
                nxt.append(new_key)
        frontier = nxt
    for combo in wanted:
        results.setdefault(combo, OracleResult(Outcome.NONE_WITHIN, None, limit, len(parent)))
    return results


def oracle_search(
    m: Dvpda,
    model: SyncModel | str,
    n: int | None = None,
    limit: int = DEFAULT_LIMIT,
    budget: int = DEFAULT_BUDGET,
) -> OracleResult:
    """Shortest (then lexicographically least) synchronizing word of length <= ``limit``."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    model = SyncModel.parse(model)
    return _search(m, [model], n, [n], limit, budget)[model, n]


def oracle_table(
    m: Dvpda,
    models: Iterable[SyncModel | str] = tuple(SyncModel),
    bounds: Iterable[int | None] = (None,),
    limit: int = DEFAULT_LIMIT,
    budget: int = DEFAULT_BUDGET,
) -> dict[tuple[SyncModel, int | None], OracleResult]:
    """:func:`oracle_search` for many models and turn bounds, sharing the searches.

    Unbounded combinations share one search and all finite bounds share
    another; each answer equals the one a separate search would give.
    """
    models = [SyncModel.parse(x) for x in models]
    bounds = list(bounds)
    out = {}
    if None in bounds:
        out.update(_search(m, models, None, [None], limit, budget))
    finite = [b for b in bounds if b is not None]
    if finite:
        out.update(_search(m, models, max(finite), finite, limit, budget))
    return out


def trace_sync_search(t, limit: int = 8):
    """Shortest word (length <= ``limit``) that trace-synchronizes transducer ``t``.

    Direct simulation: every start state runs the word, and the end states
    as well as the concatenated outputs must coincide. Returns the word or
    ``None``. Runs whose outputs already differ can never agree again, as
    outputs are only ever appended to, so such branches are cut.
    """
    n = t.n_states
    start = tuple((q, ()) for q in range(n))

    def agrees(runs):
        return all(r == runs[0] for r in runs)

    def prefix_consistent(runs):
        shortest = min(len(out) for _, out in runs)
        head = runs[0][1][:shortest]
        return all(out[:shortest] == head for _, out in runs)

    if agrees(start):
        return ()
    level = [((), start)]
    for _ in range(limit):
        nxt = []
        for word, runs in level:
            for letter in t.inputs:
                moved = []
                for q, out in runs:
                    target, emitted = t.delta[q, letter]
                    moved.append((target, out + tuple(emitted)))
                moved = tuple(moved)
                if agrees(moved):
                    return word + (letter,)
                if prefix_consistent(moved):
                    nxt.append((word + (letter,), moved))
        level = nxt
    return None
