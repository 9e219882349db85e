"""Emptiness of deterministic visibly push-down automata by summary saturation.

A *summary* ``(p, q)`` records that some well-matched word leads from ``p``
to ``q`` whatever lies below on the stack. Summaries are saturated with a
worklist; every pair keeps the first derivation that produced it so that a
witness word can be rebuilt afterwards.

Automata are explored lazily through :class:`ImplicitDvpda`, which lets the
exponential product constructions in :mod:`visync.sync` be searched without
ever being materialised.
"""
from __future__ import annotations

import enum
from collections import deque
from collections.abc import Hashable, Iterable, Sequence
from dataclasses import dataclass, field

from .automata import BOTTOM, Dvpda

DEFAULT_BUDGET = 2_000_000


class AcceptanceMode(enum.Enum):
    FINAL_STATE = "final"
    FINAL_STATE_EMPTY_STACK = "final-empty-stack"


class StateBudgetExceeded(RuntimeError):
    def __init__(self, explored: int, budget: int):
        self.explored = explored
        self.budget = budget
        super().__init__(f"explored {explored} states, budget is {budget}")


class WitnessTooLong(RuntimeError):
    def __init__(self, length: int, limit: int):
        self.length = length
        self.limit = limit
        super().__init__(f"witness has length {length}, limit is {limit}")


class ImplicitDvpda:
    """A DVPDA given by successor functions over arbitrary hashable handles.

    Subclasses set ``initial``, ``bottom`` and the three letter sequences and
    implement the successor functions. All of them must be pure and total.
    """

    initial: Hashable
    bottom: Hashable
    call_letters: Sequence[Hashable] = ()
    int_letters: Sequence[Hashable] = ()
    ret_letters: Sequence[Hashable] = ()

    def call(self, q, a) -> tuple[Hashable, Hashable]:
        raise NotImplementedError

    def internal(self, q, b) -> Hashable:
        raise NotImplementedError

    def ret(self, q, d, g) -> Hashable:
        raise NotImplementedError

    def accepting(self, q) -> bool:
        raise NotImplementedError


class ExplicitDvpda(ImplicitDvpda):
    """Adapter exposing a table-driven :class:`Dvpda` to the engine."""

    def __init__(self, m: Dvpda, initial: int | None = None, accept: Iterable[int] | None = None):
        self.m = m
        self.initial = m.initial if initial is None else initial
        if self.initial is None:
            raise ValueError("emptiness needs an initial state")
        finals = m.finals if accept is None else accept
        self.accept = frozenset(finals or ())
        self.bottom = BOTTOM
        self.call_letters = m.alphabet.calls
        self.int_letters = m.alphabet.ints
        self.ret_letters = m.alphabet.rets
        self._table = m.table

    def call(self, q, a):
        return self._table[a][q]

    def internal(self, q, b):
        return self._table[b][q]

    def ret(self, q, d, g):
        return self._table[d][q][g]

    def accepting(self, q):
        return q in self.accept


# provenance records: ("base",) | ("int", prev, letter) | ("wrap", prev, call, q1, q2, ret)
_BASE = ("base",)


class SummaryRelation:
    """Saturated well-matched summaries, grouped by source state (``entry``).

    Only *entries* get a row: the initial state, every call target and every
    state reached by reading the bottom symbol. Rows of other states are
    implied, since a summary from a row member composes with its row.
    """

    def __init__(self, m: ImplicitDvpda, budget: int = DEFAULT_BUDGET, *, eager: bool = False):
        self.m = m
        self.budget = budget
        self.eager = eager
        self.rows: dict[Hashable, dict[Hashable, tuple]] = {}
        self._waiters: dict[Hashable, list] = {}
        self._work: deque = deque()
        self._states: set = set()
        self._int_cache: dict = {}
        self._call_cache: dict = {}
        self._ret_cache: dict = {}
        self._lengths: dict = {}

    # -- cached successor functions
    def internal_succ(self, q):
        out = self._int_cache.get(q)
        if out is None:
            out = self._int_cache[q] = [(b, self.m.internal(q, b)) for b in self.m.int_letters]
        return out

    def call_succ(self, q):
        out = self._call_cache.get(q)
        if out is None:
            out = self._call_cache[q] = [(a, *self.m.call(q, a)) for a in self.m.call_letters]
        return out

    def ret_succ(self, q, g):
        by_symbol = self._ret_cache.get(q)
        if by_symbol is None:
            by_symbol = self._ret_cache[q] = {}
        out = by_symbol.get(g)
        if out is None:
            out = by_symbol[g] = [(d, self.m.ret(q, d, g)) for d in self.m.ret_letters]
        return out

    # -- saturation
    @property
    def explored(self) -> int:
        return len(self._states)

    @property
    def pairs(self) -> set[tuple[Hashable, Hashable]]:
        return {(p, q) for p, row in self.rows.items() for q in row}

    def __contains__(self, pair) -> bool:
        p, q = pair
        return p in self.rows and q in self.rows[p]

    def add_entry(self, e) -> None:
        if e in self.rows:
            return
        self.rows[e] = {}
        self._waiters[e] = []
        self._add(e, e, _BASE)

    def _add(self, p, q, prov) -> None:
        row = self.rows[p]
        if q in row:
            return
        row[q] = prov
        if q not in self._states:
            self._states.add(q)
            if len(self._states) > self.budget:
                raise StateBudgetExceeded(len(self._states), self.budget)
        self._work.append((p, q))

    def run(self) -> SummaryRelation:
        rows, waiters, work = self.rows, self._waiters, self._work
        states, budget = self._states, self.budget
        internal_succ, call_succ, ret_succ = self.internal_succ, self.call_succ, self.ret_succ
        add_entry, eager, bottom = self.add_entry, self.eager, self.m.bottom

        # inlined _add: membership is tested before building provenance
        def add(row, p, t, prov):
            row[t] = prov
            if t not in states:
                states.add(t)
                if len(states) > budget:
                    raise StateBudgetExceeded(len(states), budget)
            work.append((p, t))

        while work:
            p, q = work.popleft()
            row = rows[p]
            for b, t in internal_succ(q):
                if t not in row:
                    add(row, p, t, ("int", q, b))
            for a, q1, g in call_succ(q):
                add_entry(q1)
                waiters[q1].append((p, q, a, g))
                for q2 in list(rows[q1]):
                    for d, t in ret_succ(q2, g):
                        if t not in row:
                            add(row, p, t, ("wrap", q, a, q1, q2, d))
            for p0, q0, a, g in list(waiters[p]):
                row0 = rows[p0]
                for d, t in ret_succ(q, g):
                    if t not in row0:
                        add(row0, p0, t, ("wrap", q0, a, p, q, d))
            if eager:
                add_entry(q)
                for d, t in ret_succ(q, bottom):
                    add_entry(t)
        return self

    # -- witness words for pairs
    def pair_length(self, p, q) -> int:
        memo = self._lengths
        todo = [(p, q)]
        while todo:
            key = todo[-1]
            if key in memo:
                todo.pop()
                continue
            prov = self.rows[key[0]][key[1]]
            if prov[0] == "base":
                memo[key] = 0
                todo.pop()
            elif prov[0] == "int":
                dep = (key[0], prov[1])
                if dep in memo:
                    memo[key] = memo[dep] + 1
                    todo.pop()
                else:
                    todo.append(dep)
            else:
                dep1, dep2 = (key[0], prov[1]), (prov[3], prov[4])
                missing = [d for d in (dep1, dep2) if d not in memo]
                if missing:
                    todo.extend(missing)
                else:
                    memo[key] = memo[dep1] + memo[dep2] + 2
                    todo.pop()
        return memo[(p, q)]

    def pair_word(self, p, q, out: list) -> list:
        """Append a well-matched word leading from ``p`` to ``q`` onto ``out``."""
        todo: list = [("pair", p, q)]
        while todo:
            item = todo.pop()
            if item[0] == "letter":
                out.append(item[1])
                continue
            _, src, dst = item
            prov = self.rows[src][dst]
            if prov[0] == "int":
                todo.append(("letter", prov[2]))
                todo.append(("pair", src, prov[1]))
            elif prov[0] == "wrap":
                _, q0, a, q1, q2, d = prov
                todo.append(("letter", d))
                todo.append(("pair", q1, q2))
                todo.append(("letter", a))
                todo.append(("pair", src, q0))
        return out


def saturate(m: ImplicitDvpda, budget: int = DEFAULT_BUDGET) -> SummaryRelation:
    """Saturate summaries from every state discovered from ``m.initial``."""
    rel = SummaryRelation(m, budget, eager=True)
    rel.add_entry(m.initial)
    return rel.run()


@dataclass
class Witness:
    """Derivation of an accepted word; expand it to get the letters."""

    relation: SummaryRelation
    target: Hashable
    # state -> ("start",) | ("wm", entry) | ("bot", state, letter) | ("call", state, letter)
    provenance: dict
    _length: int | None = field(default=None, repr=False)

    def _chain(self) -> list[tuple]:
        chain = []
        x = self.target
        while True:
            prov = self.provenance[x]
            chain.append((x, prov))
            if prov[0] == "start":
                break
            x = prov[1]
        chain.reverse()
        return chain

    @property
    def length(self) -> int:
        if self._length is None:
            total = 0
            for x, prov in self._chain():
                if prov[0] == "wm":
                    total += self.relation.pair_length(prov[1], x)
                elif prov[0] in ("bot", "call"):
                    total += 1
            self._length = total
        return self._length

    def expand(self, limit: int | None = None) -> tuple:
        if limit is not None and self.length > limit:
            raise WitnessTooLong(self.length, limit)
        out: list = []
        for x, prov in self._chain():
            if prov[0] == "wm":
                self.relation.pair_word(prov[1], x, out)
            elif prov[0] in ("bot", "call"):
                out.append(prov[2])
        return tuple(out)


@dataclass
class EmptinessResult:
    empty: bool
    witness: Witness | None
    explored: int


def check_emptiness(
    m: ImplicitDvpda, mode: AcceptanceMode = AcceptanceMode.FINAL_STATE, budget: int = DEFAULT_BUDGET
) -> EmptinessResult:
    """Decide whether ``m`` accepts some word under ``mode``.

    ``bottom`` collects the states reachable with the stack holding only the
    bottom symbol: closed under summaries and bottom-reading returns.
    ``reach`` extends it with pending calls, giving every reachable state.
    """
    rel = SummaryRelation(m, budget)
    init = m.initial
    bottom: dict = {init: ("start",)}
    rel.add_entry(init)
    queue = deque([init])
    expanded: set = set()

    def found(x):
        return EmptinessResult(False, Witness(rel, x, bottom if x in bottom else reach), rel.explored)

    if m.accepting(init):
        return found(init)
    while queue:
        e = queue.popleft()
        rel.run()
        for q in list(rel.rows[e]):
            if q not in bottom:
                bottom[q] = ("wm", e)
                if m.accepting(q):
                    return found(q)
            if q in expanded:
                continue
            expanded.add(q)
            for d, t in rel.ret_succ(q, m.bottom):
                if t not in bottom:
                    bottom[t] = ("bot", q, d)
                    rel.add_entry(t)
                    queue.append(t)
                    if m.accepting(t):
                        return found(t)
    rel.run()
    if mode is AcceptanceMode.FINAL_STATE_EMPTY_STACK:
        return EmptinessResult(True, None, rel.explored)

    reach: dict = dict(bottom)
    pending = deque(reach)
    opened: set = set()
    while pending:
        s = pending.popleft()
        for a, q1, _ in rel.call_succ(s):
            if q1 in opened:
                continue
            opened.add(q1)
            if q1 not in reach:
                reach[q1] = ("call", s, a)
                pending.append(q1)
                if m.accepting(q1):
                    return found(q1)
            for q in rel.rows[q1]:
                if q not in reach:
                    reach[q] = ("wm", q1)
                    pending.append(q)
                    if m.accepting(q):
                        return found(q)
    return EmptinessResult(True, None, rel.explored)


def is_empty(m: ImplicitDvpda, mode: AcceptanceMode = AcceptanceMode.FINAL_STATE,
             budget: int = DEFAULT_BUDGET) -> bool:
    return check_emptiness(m, mode, budget).empty


def witness(m: ImplicitDvpda, mode: AcceptanceMode = AcceptanceMode.FINAL_STATE,
            budget: int = DEFAULT_BUDGET) -> Witness | None:
    return check_emptiness(m, mode, budget).witness
