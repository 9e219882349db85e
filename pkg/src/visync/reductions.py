"""Hardness constructions as instance generators, and solvers for their DFA sources.

Each generator maps a DFA with a state subset to a DVPDA that is
synchronizable (in the stated model and turn bound) exactly when the subset
problem has a solution. Together with the brute-force subset solvers they
give metamorphic checks of the decision procedures.

"Arbitrary but fixed" states in the constructions are always the least
index that qualifies.
"""
from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass

from .automata import Dfa, Dvpda, Kind, PartitionedAlphabet, StackAlphabet, validate

DEFAULT_CAP = 12


class CapExceeded(ValueError):
    pass


class NameCollision(ValueError):
    pass


@dataclass(frozen=True)
class DfaSubsetInstance:
    dfa: Dfa
    subset: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "subset", frozenset(self.subset))
        if not self.subset:
            raise ValueError("subset must be non-empty")
        if not all(0 <= s < self.dfa.n_states for s in self.subset):
            raise ValueError("subset must consist of states of the DFA")


# -- solvers -----------------------------------------------------------------


def _image_search(dfa: Dfa, start: frozenset[int], goal, cap: int):
    if dfa.n_states > cap:
        raise CapExceeded(f"{dfa.n_states} states exceed the cap of {cap}")
    table = dfa.table
    parent = {start: None}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if goal(current):
            word = []
            while parent[current] is not None:
                current, a = parent[current]
                word.append(dfa.letters[a])
            return True, tuple(reversed(word))
        for a, row in enumerate(table):
            image = frozenset(row[q] for q in current)
            if image not in parent:
                parent[image] = (current, a)
                queue.append(image)
    return False, None


def solve_into_subset(inst: DfaSubsetInstance, cap: int = DEFAULT_CAP):
    """Is there a word mapping every state into the subset? Returns ``(answer, word)``."""
    everything = frozenset(range(inst.dfa.n_states))
    return _image_search(inst.dfa, everything, lambda image: image <= inst.subset, cap)


def solve_from_subset(inst: DfaSubsetInstance, cap: int = DEFAULT_CAP):
    """Is there a word synchronizing the subset? Returns ``(answer, word)``."""
    return _image_search(inst.dfa, inst.subset, lambda image: len(image) == 1, cap)


# -- constructions -----------------------------------------------------------


def _fresh(dfa: Dfa, *names: str) -> None:
    clash = [x for x in names if x in dfa.letters]
    if clash or len(set(names)) != len(names):
        raise NameCollision(f"letter names {clash or names} are not fresh")


def _build(n_states, letters, kinds, stack, delta_call, delta_int, delta_ret) -> Dvpda:
    m = Dvpda(n_states, PartitionedAlphabet(letters, kinds), StackAlphabet(stack),
              delta_call, delta_int, delta_ret)
    validate(m)
    return m


def reduce_into_subset_to_same(inst: DfaSubsetInstance, call: str = "a") -> Dvpda:
    """Into-subset instance to a return-free DVPDA, judged in the same stack model.

    A sink ``q_S`` (index ``|Q|``) is entered by the call letter from the
    subset, pushing ``SMILE``; outside the subset the call stays put and
    pushes ``FROWN``.
    """
    dfa, subset = inst.dfa, inst.subset
    _fresh(dfa, call)
    n = dfa.n_states
    sink = n
    letters = (*dfa.letters, call)
    kinds = (Kind.INT,) * len(dfa.letters) + (Kind.CALL,)
    smile, frown = 1, 2
    a = len(dfa.letters)
    delta_int = {(q, x): dfa.delta[q, x] for q in range(n) for x in range(len(dfa.letters))}
    delta_int |= {(sink, x): sink for x in range(len(dfa.letters))}
    delta_call = {(q, a): ((sink, smile) if q in subset else (q, frown)) for q in range(n)}
    delta_call[sink, a] = (sink, smile)
    return _build(n + 1, letters, kinds, ("BOT", "SMILE", "FROWN"), delta_call, delta_int, {})


def reduce_from_subset_to_arb(inst: DfaSubsetInstance, ret: str = "r") -> Dvpda:
    """From-subset instance to a DVPDA judged in the arbitrary stack model.

    Every DFA letter becomes a call that pushes the state it left, and the
    return letter undoes one such move; on the bottom it maps the complement
    of the subset onto its least member.
    """
    dfa, subset = inst.dfa, inst.subset
    _fresh(dfa, ret)
    n, k = dfa.n_states, len(dfa.letters)
    target = min(subset)
    letters = (*dfa.letters, ret)
    kinds = (Kind.CALL,) * k + (Kind.RET,)
    stack = ("BOT", *(f"Q{q}" for q in range(n)))
    # stack symbol of state q is q + 1
    delta_call = {(q, x): (dfa.delta[q, x], q + 1) for q in range(n) for x in range(k)}
    delta_ret = {}
    for q in range(n):
        delta_ret[q, k, 0] = q if q in subset else target
        for p in range(n):
            delta_ret[q, k, p + 1] = p
    return _build(n, letters, kinds, stack, delta_call, {}, delta_ret)


def reduce_into_subset_to_nturn_dvca(
    inst: DfaSubsetInstance, n: int, call: str = "a", ret: str = "b"
) -> Dvpda:
    """Into-subset instance to a counter automaton needing exactly ``n`` turns.

    States: the DFA states, then ``q_sync`` and ``q_stall_0 .. q_stall_n``.
    The stall chain can only be walked by alternating between non-empty and
    empty counters, one turn per step.
    """
    if n < 1:
        raise ValueError("turn bound must be at least 1")
    dfa, subset = inst.dfa, inst.subset
    _fresh(dfa, call, ret)
    nq, k = dfa.n_states, len(dfa.letters)
    sync = nq
    stall = [nq + 1 + i for i in range(n + 1)]
    total = nq + 2 + n
    fallback = 0
    a, b = k, k + 1
    letters = (*dfa.letters, call, ret)
    kinds = (Kind.INT,) * k + (Kind.CALL, Kind.RET)
    one, bot = 1, 0

    delta_int = {(q, x): (dfa.delta[q, x] if q < nq else q) for q in range(total) for x in range(k)}
    delta_call, delta_ret = {}, {}
    for q in range(nq):
        delta_call[q, a] = (stall[0], one) if q in subset else (q, one)
        delta_ret[q, b, bot] = delta_ret[q, b, one] = q
    delta_call[sync, a] = (sync, one)
    delta_ret[sync, b, bot] = delta_ret[sync, b, one] = sync
    for i in range(n):
        s = stall[i]
        delta_call[s, a] = (s, one)
        if i % 2 == 0:
            delta_ret[s, b, one] = stall[i + 1]
            delta_ret[s, b, bot] = fallback
        else:
            delta_ret[s, b, one] = fallback
            delta_ret[s, b, bot] = stall[i + 1]
    last = stall[n]
    delta_ret[last, b, one] = fallback
    if n % 2 == 0:
        delta_call[last, a] = (sync, one)
        delta_ret[last, b, bot] = fallback
    else:
        delta_call[last, a] = (last, one)
        delta_ret[last, b, bot] = sync
    return _build(total, letters, kinds, ("BOT", "1"), delta_call, delta_int, delta_ret)


def reduce_from_subset_to_zero_turn(inst: DfaSubsetInstance, ret: str = "b") -> Dvpda:
    """From-subset instance to a counter automaton judged at zero turns.

    DFA letters become calls pushing the counter symbol. The return letter,
    read on the bottom, maps the complement of the subset onto its least
    member; everything else it leaves alone.
    """
    dfa, subset = inst.dfa, inst.subset
    _fresh(dfa, ret)
    n, k = dfa.n_states, len(dfa.letters)
    target = min(subset)
    letters = (*dfa.letters, ret)
    kinds = (Kind.CALL,) * k + (Kind.RET,)
    delta_call = {(q, x): (dfa.delta[q, x], 1) for q in range(n) for x in range(k)}
    delta_ret = {}
    for q in range(n):
        delta_ret[q, k, 0] = q if q in subset else target
        delta_ret[q, k, 1] = q
    return _build(n, letters, kinds, ("BOT", "1"), delta_call, {}, delta_ret)


REDUCTIONS = {
    "thm2": reduce_into_subset_to_same,
    "thm3": reduce_from_subset_to_arb,
    "thm8": reduce_into_subset_to_nturn_dvca,
    "thm10": reduce_from_subset_to_zero_turn,
}


def all_subsets(n: int) -> Iterable[frozenset[int]]:
    """Non-empty subsets of ``range(n)``, smallest bitmask first."""
    for mask in range(1, 1 << n):
        yield frozenset(q for q in range(n) if mask >> q & 1)
