"""Deciding synchronizability of DVPDAs in the empty, same and arbitrary stack models.

:func:`decide_sync` dispatches to the cheapest procedure that is exact for
the given automaton class, stack model and turn bound. Every procedure
returns a :class:`Decision` whose witness can be replayed with
:func:`visync.semantics.check_witness`.
"""
from __future__ import annotations

import time
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

from .automata import BOTTOM, FRESH_RETURN, Dfa, Dvpda, Kind, classify
from .emptiness import (
    DEFAULT_BUDGET,
    AcceptanceMode,
    ImplicitDvpda,
    StateBudgetExceeded,
    check_emptiness,
)
from .semantics import SyncModel, run

WITNESS_LIMIT = 1_000_000


@dataclass
class Decision:
    answer: bool
    witness: tuple[str, ...] | None
    procedure: str
    stats: dict = field(default_factory=dict)
    witness_length: int | None = None

    def __post_init__(self):
        if self.witness is not None and self.witness_length is None:
            self.witness_length = len(self.witness)


# -- DFA pair algorithm -----------------------------------------------------


def _pair_merging_letters(dfa: Dfa) -> dict[tuple[int, int], int]:
    """For every mergeable pair ``p < q``, the first letter of a shortest merging word.

    Backward breadth-first search in the pair automaton from the diagonal.
    Among letters that make progress the earliest declared one is kept.
    """
    n = dfa.n_states
    table = dfa.table
    preimage: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for p in range(n):
        for q in range(p + 1, n):
            for row in table:
                x, y = row[p], row[q]
                key = (x, y) if x <= y else (y, x)
                preimage.setdefault(key, []).append((p, q))
    dist = {(r, r): 0 for r in range(n)}
    queue = deque(dist)
    while queue:
        pair = queue.popleft()
        for pre in preimage.get(pair, ()):
            if pre not in dist:
                dist[pre] = dist[pair] + 1
                queue.append(pre)
    first = {}
    for (p, q), d in dist.items():
        if p == q:
            continue
        for a, row in enumerate(table):
            x, y = row[p], row[q]
            if dist.get((x, y) if x <= y else (y, x)) == d - 1:
                first[p, q] = a
                break
    return first


def dfa_pair_sync(dfa: Dfa, procedure: str = "dfa-pair") -> Decision:
    """Classical pair algorithm: merge the two least active states, repeat."""
    start = time.perf_counter()
    n = dfa.n_states
    first = _pair_merging_letters(dfa)
    table = dfa.table
    if any((p, q) not in first for p in range(n) for q in range(p + 1, n)):
        return Decision(False, None, procedure, {"seconds": time.perf_counter() - start})
    active = set(range(n))
    word: list[int] = []
    rounds = 0
    while len(active) > 1:
        p, q = sorted(active)[:2]
        while p != q:
            a = first[(p, q) if p < q else (q, p)]
            word.append(a)
            p, q = table[a][p], table[a][q]
            active = {table[a][s] for s in active}
        rounds += 1
    stats = {"rounds": rounds, "seconds": time.perf_counter() - start}
    return Decision(True, tuple(dfa.letters[a] for a in word), procedure, stats)


def _dfa_view(m: Dvpda, letters: Sequence[int], *, bottom_reads: bool = False) -> Dfa:
    """DFA over a subset of the letters of ``m``, ignoring the stack.

    Call letters keep their target state; return letters read the bottom
    symbol, which is only sound when ``bottom_reads`` says the caller knows
    the stack is empty whenever they fire.
    """
    delta = {}
    for i, a in enumerate(letters):
        kind, row = m.kinds[a], m.table[a]
        for q in range(m.n_states):
            if kind is Kind.CALL:
                delta[q, i] = row[q][0]
            elif kind is Kind.INT:
                delta[q, i] = row[q]
            else:
                assert bottom_reads
                delta[q, i] = row[q][BOTTOM]
    return Dfa(m.n_states, tuple(m.letters[a] for a in letters), delta)


def _kinds(m: Dvpda, *wanted: Kind) -> list[int]:
    return [a for a, k in enumerate(m.kinds) if k in wanted]


# -- pair product for the empty stack model ---------------------------------


class PairProduct(ImplicitDvpda):
    """Two copies of ``m`` started in ``p`` and ``q`` plus a merged single copy.

    Pair states are ``(r, s)`` tuples, merged states plain ints. Stack
    symbols are pairs of symbols of ``m``. Reading the bottom with a return
    letter from a diagonal pair ``(r, r)`` enters the merged state ``r``.
    """

    def __init__(self, m: Dvpda, p: int, q: int):
        self.m = m
        self.initial = (p, q)
        self.bottom = (BOTTOM, BOTTOM)
        self.call_letters = m.alphabet.calls
        self.int_letters = m.alphabet.ints
        self.ret_letters = m.alphabet.rets
        self._t = m.table

    def call(self, state, a):
        row = self._t[a]
        if isinstance(state, int):
            t, g = row[state]
            return t, (g, g)
        (r1, g1), (s1, g2) = row[state[0]], row[state[1]]
        return (r1, s1), (g1, g2)

    def internal(self, state, b):
        row = self._t[b]
        if isinstance(state, int):
            return row[state]
        return row[state[0]], row[state[1]]

    def ret(self, state, d, g):
        row = self._t[d]
        if isinstance(state, int):
            return row[state][g[0]]
        r, s = state
        if r == s and g == self.bottom:
            return r
        return row[r][g[0]], row[s][g[1]]

    def accepting(self, state):
        return isinstance(state, int)


def pair_product(m: Dvpda, p: int, q: int) -> PairProduct:
    return PairProduct(m, p, q)


def _image(m: Dvpda, states, word) -> set[int]:
    out = set()
    for s in states:
        c = run(m, s, word)
        assert c.stack == (BOTTOM,)
        out.add(c.state)
    return out


def _trim_pair_witness(m: Dvpda, p: int, q: int, word: tuple[int, ...]) -> tuple[int, ...]:
    """Shortest prefix of ``word`` that already merges ``p`` and ``q`` with empty stacks."""
    t = m.table
    (sp, stp), (sq, stq) = (p, [BOTTOM]), (q, [BOTTOM])
    if sp == sq:
        return ()
    for i, a in enumerate(word):
        kind = m.kinds[a]
        for which in (0, 1):
            s, st = (sp, stp) if which == 0 else (sq, stq)
            if kind is Kind.CALL:
                s, g = t[a][s]
                st.append(g)
            elif kind is Kind.INT:
                s = t[a][s]
            else:
                s = t[a][s][st[-1]]
                if st[-1] != BOTTOM:
                    st.pop()
            if which == 0:
                sp = s
            else:
                sq = s
        if sp == sq and len(stp) == 1:
            return word[: i + 1]
    return word


def sync_empty_pairwise(m: Dvpda, budget: int = DEFAULT_BUDGET) -> Decision:
    """Empty-model synchronization by repeatedly merging the two least active states.

    Needs at least one return letter; without one the empty model forbids
    call letters altogether and :func:`decide_sync` handles it as a DFA.
    """
    start = time.perf_counter()
    active = set(range(m.n_states))
    word: list[int] = []
    rounds = explored = 0
    while len(active) > 1:
        p, q = sorted(active)[:2]
        res = check_emptiness(pair_product(m, p, q), AcceptanceMode.FINAL_STATE_EMPTY_STACK, budget)
        explored += res.explored
        if res.empty:
            stats = {"rounds": rounds, "explored": explored, "seconds": time.perf_counter() - start}
            return Decision(False, None, "pairwise-empty", stats)
        piece = _trim_pair_witness(m, p, q, res.witness.expand(WITNESS_LIMIT))
        word.extend(piece)
        active = _image(m, active, piece)
        rounds += 1
    stats = {"rounds": rounds, "explored": explored, "seconds": time.perf_counter() - start}
    return Decision(True, m.decode(word), "pairwise-empty", stats)


# -- |Q|-fold products ------------------------------------------------------

CHECK, FIN, FAIL = "q_check", "q_fin", "q_fail"
_JUNK = "#"  # pushed by the control states, never inspected


def _all_equal(t) -> bool:
    first = t[0]
    for x in t:
        if x != first:
            return False
    return True


class TupleProduct(ImplicitDvpda):
    """The ``|Q|``-fold product of ``m``, optionally with a stroke index.

    Without ``turns`` the states are tuples of states of ``m``. With a turn
    bound ``n`` they are ``(tuple, I)`` where ``I`` counts strokes used so
    far, bounded by ``n + 1``. For the same stack model a fresh return
    letter ``__r`` drives the equality check on the stacks through
    ``q_check`` into ``q_fin``.
    """

    def __init__(self, m: Dvpda, model: SyncModel, turns: int | None = None):
        self.m = m
        self.model = model
        self.turns = turns
        n = m.n_states
        self._t = m.table
        self._n = n
        start = tuple(range(n))
        self.initial = start if turns is None else (start, 0)
        self.bottom = (BOTTOM,) * n
        self.call_letters = m.alphabet.calls
        self.int_letters = m.alphabet.ints
        rets = m.alphabet.rets
        self.ret_letters = (*rets, FRESH_RETURN) if model is SyncModel.SAME else rets

    def mode(self) -> AcceptanceMode:
        if self.model is SyncModel.EMPTY:
            return AcceptanceMode.FINAL_STATE_EMPTY_STACK
        return AcceptanceMode.FINAL_STATE

    def _split(self, state):
        return (state, None) if self.turns is None else state

    def _join(self, tup, index):
        return tup if self.turns is None else (tup, index)

    def call(self, state, a):
        if isinstance(state, str):
            return (state if state != CHECK else FAIL), _JUNK
        tup, index = self._split(state)
        if index is not None and index % 2 == 0:
            if index == self.turns + 1:
                return FAIL, _JUNK
            index += 1
        row = self._t[a]
        moves = [row[q] for q in tup]
        return self._join(tuple(t for t, _ in moves), index), tuple(g for _, g in moves)

    def internal(self, state, b):
        if isinstance(state, str):
            return state if state != CHECK else FAIL
        tup, index = self._split(state)
        row = self._t[b]
        return self._join(tuple(row[q] for q in tup), index)

    def ret(self, state, d, g):
        if d == FRESH_RETURN:
            return self._fresh_ret(state, g)
        if isinstance(state, str):
            return state if state != CHECK else FAIL
        tup, index = self._split(state)
        if index is not None and g != self.bottom:
            if index == 0:
                return FAIL
            if index % 2 == 1:
                if index == self.turns + 1:
                    return FAIL
                index += 1
        row = self._t[d]
        if g == _JUNK:
            return FAIL
        return self._join(tuple(row[q][x] for q, x in zip(tup, g)), index)

    def _fresh_ret(self, state, g):
        if state == CHECK:
            if g == self.bottom:
                return FIN
            return CHECK if g != _JUNK and _all_equal(g) else FAIL
        if isinstance(state, str):
            return state
        tup, _ = self._split(state)
        if not _all_equal(tup):
            return FAIL
        if g == self.bottom:
            return FIN
        return CHECK if g != _JUNK and _all_equal(g) else FAIL

    def accepting(self, state):
        if self.model is SyncModel.SAME:
            return state == FIN
        if isinstance(state, str):
            return False
        tup, _ = self._split(state)
        return _all_equal(tup)


class SetProduct(TupleProduct):
    """Product over *sets* of states, exact for very visibly automata.

    Every call letter pushes the same symbol in all runs, so all runs share
    one stack and runs in equal states stay equal forever. States are sorted
    tuples of distinct states (with the stroke index when bounded) and the
    stack symbol is the common pushed symbol. Equal stacks make the same
    model coincide with the arbitrary one, so no stack check is needed.
    """

    def __init__(self, m: Dvpda, model: SyncModel, turns: int | None = None):
        super().__init__(m, model, turns)
        self.bottom = BOTTOM
        self.ret_letters = m.alphabet.rets

    def call(self, state, a):
        if state == FAIL:
            return FAIL, BOTTOM
        tup, index = self._split(state)
        if index is not None and index % 2 == 0:
            if index == self.turns + 1:
                return FAIL, BOTTOM
            index += 1
        row = self._t[a]
        return self._join(tuple(sorted({row[q][0] for q in tup})), index), row[tup[0]][1]

    def internal(self, state, b):
        if state == FAIL:
            return FAIL
        tup, index = self._split(state)
        row = self._t[b]
        return self._join(tuple(sorted({row[q] for q in tup})), index)

    def ret(self, state, d, g):
        if state == FAIL:
            return FAIL
        tup, index = self._split(state)
        if index is not None and g != BOTTOM:
            if index == 0 or (index % 2 == 1 and index == self.turns + 1):
                return FAIL
            if index % 2 == 1:
                index += 1
        row = self._t[d]
        return self._join(tuple(sorted({row[q][g] for q in tup})), index)

    def accepting(self, state):
        return state != FAIL and len(self._split(state)[0]) == 1


def full_product(m: Dvpda, model: SyncModel | str) -> TupleProduct:
    return TupleProduct(m, SyncModel.parse(model))


def turn_product(m: Dvpda, model: SyncModel | str, n: int) -> TupleProduct:
    if n is None or n < 0:
        raise ValueError("turn_product needs a non-negative turn bound")
    return TupleProduct(m, SyncModel.parse(model), n)


def _decide_by_product(prod: TupleProduct, procedure: str, budget: int) -> Decision:
    start = time.perf_counter()
    res = check_emptiness(prod, prod.mode(), budget)
    stats = {"explored": res.explored}
    if res.empty:
        stats["seconds"] = time.perf_counter() - start
        return Decision(False, None, procedure, stats)
    length = res.witness.length
    word = None
    if length <= WITNESS_LIMIT:
        letters = res.witness.expand()
        if FRESH_RETURN in letters:
            letters = letters[: letters.index(FRESH_RETURN)]
        word = prod.m.decode(letters)
        length = len(word)
    stats["seconds"] = time.perf_counter() - start
    return Decision(True, word, procedure, stats, witness_length=length)


# -- zero-turn reachability -------------------------------------------------


def zero_turn_reach(m: Dvpda, model: SyncModel | str) -> Decision:
    """0-turn synchronization in the same or arbitrary model as DFA reachability.

    Search over ``(tuple of states, stack used)``. Returns only read the
    bottom, so they are allowed while nothing has been pushed. In the same
    model a call letter is allowed only if every component pushes the same
    symbol, since nothing pushed can ever be removed again.
    """
    model = SyncModel.parse(model)
    same = model is SyncModel.SAME
    procedure = "zero-turn-same-reach" if same else "zero-turn-arb-reach"
    start_t = time.perf_counter()
    t, kinds = m.table, m.kinds
    start = (tuple(range(m.n_states)), 0)
    parent: dict = {start: None}
    queue = deque([start])
    goal = None
    while queue:
        node = queue.popleft()
        tup, used = node
        if _all_equal(tup):
            goal = node
            break
        for a, kind in enumerate(kinds):
            row = t[a]
            if kind is Kind.INT:
                nxt = (tuple(row[q] for q in tup), used)
            elif kind is Kind.RET:
                if used:
                    continue
                nxt = (tuple(row[q][BOTTOM] for q in tup), 0)
            else:
                moves = [row[q] for q in tup]
                if same and not _all_equal([g for _, g in moves]):
                    continue
                nxt = (tuple(x for x, _ in moves), 1)
            if nxt not in parent:
                parent[nxt] = (node, a)
                queue.append(nxt)
    stats = {"explored": len(parent), "seconds": time.perf_counter() - start_t}
    if goal is None:
        return Decision(False, None, procedure, stats)
    word = []
    while parent[goal] is not None:
        goal, a = parent[goal]
        word.append(a)
    return Decision(True, m.decode(reversed(word)), procedure, stats)


def zero_turn_same_reach(m: Dvpda) -> Decision:
    return zero_turn_reach(m, SyncModel.SAME)


# -- dispatch ---------------------------------------------------------------


def _relabel(d: Decision, procedure: str) -> Decision:
    return Decision(d.answer, d.witness, procedure, d.stats, d.witness_length)


def _empty_unbounded(m: Dvpda, has_return: bool, budget: int) -> Decision:
    if has_return:
        return sync_empty_pairwise(m, budget)
    # no return letter: a call can never be undone, so only internals help
    return _relabel(dfa_pair_sync(_dfa_view(m, _kinds(m, Kind.INT))), "pairwise-empty")


def decide_sync(
    m: Dvpda, model: SyncModel | str, n: int | None = None, budget: int = DEFAULT_BUDGET
) -> Decision:
    """Decide whether ``m`` has a synchronizing word in ``model`` with at most ``n`` turns.

    Raises :class:`~visync.emptiness.StateBudgetExceeded` when an exponential
    product outgrows ``budget``.
    """
    model = SyncModel.parse(model)
    if n is not None and n < 0:
        raise ValueError("turn bound must be non-negative")
    if m.n_states == 1:
        return Decision(True, (), "singleton")
    if n == 0:
        if model is SyncModel.EMPTY:
            # no call may be read, so returns only ever see the bottom
            dfa = _dfa_view(m, _kinds(m, Kind.INT, Kind.RET), bottom_reads=True)
            return _relabel(dfa_pair_sync(dfa), "zero-turn-dfa")
        return zero_turn_reach(m, model)
    report = classify(m)
    if n is not None:
        product = SetProduct if report.is_very_visibly else TupleProduct
        return _decide_by_product(product(m, model, n), "turn-product", budget)

    if report.is_very_visibly and model is not SyncModel.EMPTY:
        # stacks coincide on all runs, so every model reduces to the empty one
        if report.has_return:
            return _relabel(sync_empty_pairwise(m, budget), "vv-equivalence")
        dfa = _dfa_view(m, _kinds(m, Kind.CALL, Kind.INT))
        return _relabel(dfa_pair_sync(dfa), "vv-equivalence")
    if model is SyncModel.EMPTY:
        return _empty_unbounded(m, report.has_return, budget)
    if model is SyncModel.SAME:
        if report.has_return:
            return _relabel(sync_empty_pairwise(m, budget), "same-return-reduction")
        return zero_turn_reach(m, SyncModel.SAME)
    if not report.has_return:
        dfa = _dfa_view(m, _kinds(m, Kind.CALL, Kind.INT))
        return _relabel(dfa_pair_sync(dfa), "arb-noreturn-dfa")
    return _decide_by_product(full_product(m, model), "full-product", budget)


__all__ = [
    "Decision",
    "PairProduct",
    "SetProduct",
    "StateBudgetExceeded",
    "TupleProduct",
    "decide_sync",
    "dfa_pair_sync",
    "full_product",
    "pair_product",
    "sync_empty_pairwise",
    "turn_product",
    "zero_turn_reach",
    "zero_turn_same_reach",
]
