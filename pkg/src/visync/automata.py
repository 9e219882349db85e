"""Automaton data model: DFAs and deterministic visibly push-down automata.

States, letters and stack symbols are dense integer indices. Names are kept
only for reading and writing files and for presenting witness words.
"""
from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

BOTTOM = 0
FRESH_RETURN = "__r"  # reserved for the same-stack product construction
RESERVED_LETTERS = frozenset({FRESH_RETURN})


class Kind(enum.Enum):
    CALL = "call"
    INT = "int"
    RET = "ret"


class UnknownLetter(ValueError):
    pass


# -- validation diagnostics -------------------------------------------------


@dataclass(frozen=True)
class Violation:
    def __str__(self):
        fields = ", ".join(f"{k}={v!r}" for k, v in vars(self).items())
        return f"{type(self).__name__}({fields})"


@dataclass(frozen=True)
class IncompleteTransition(Violation):
    state: int
    letter: str
    symbol: str | None = None


@dataclass(frozen=True)
class PushesBottom(Violation):
    state: int
    letter: str


@dataclass(frozen=True)
class DuplicateLetter(Violation):
    letter: str


@dataclass(frozen=True)
class BadPartition(Violation):
    letter: str
    reason: str


@dataclass(frozen=True)
class BadTarget(Violation):
    state: int
    letter: str
    target: object


@dataclass(frozen=True)
class BadStructure(Violation):
    reason: str


class ValidationError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            shown += f"; ... {more} more"
        super().__init__(shown)


# -- alphabets --------------------------------------------------------------


@dataclass(frozen=True)
class PartitionedAlphabet:
    """Input letters, each tagged call, internal or return."""

    letters: tuple[str, ...]
    kinds: tuple[Kind, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "kinds", tuple(self.kinds))

    def __len__(self):
        return len(self.letters)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.letters)}

    def of_kind(self, kind: Kind) -> tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds) if k is kind)

    @cached_property
    def calls(self) -> tuple[int, ...]:
        return self.of_kind(Kind.CALL)

    @cached_property
    def ints(self) -> tuple[int, ...]:
        return self.of_kind(Kind.INT)

    @cached_property
    def rets(self) -> tuple[int, ...]:
        return self.of_kind(Kind.RET)

    def resolve(self, letter: str | int) -> int:
        if isinstance(letter, int) and not isinstance(letter, bool):
            if 0 <= letter < len(self.letters):
                return letter
            raise UnknownLetter(letter)
        try:
            return self.index[letter]
        except KeyError:
            raise UnknownLetter(letter) from None


@dataclass(frozen=True)
class StackAlphabet:
    symbols: tuple[str, ...]
    bottom: int = BOTTOM

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))

    def __len__(self):
        return len(self.symbols)

    @cached_property
    def index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.symbols)}


# -- automata ---------------------------------------------------------------


@dataclass(frozen=True)
class Dfa:
    n_states: int
    letters: tuple[str, ...]
    delta: Mapping[tuple[int, int], int]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def from_tables(cls, n_states: int, tables: Mapping[str, Sequence[int]], *, check=True) -> Dfa:
        """Build from ``{letter: [target of state 0, target of state 1, ...]}``."""
        letters = tuple(tables)
        delta = {(q, a): t for a, row in enumerate(tables.values()) for q, t in enumerate(row)}
        dfa = cls(n_states, letters, delta)
        if check:
            validate_dfa(dfa)
        return dfa

    @cached_property
    def table(self) -> tuple[tuple[int, ...], ...]:
        """``table[a][q]`` is the successor of ``q`` under letter ``a``."""
        return tuple(
            tuple(self.delta[q, a] for q in range(self.n_states)) for a in range(len(self.letters))
        )

    def image(self, states: Iterable[int], word: Iterable[int]) -> frozenset[int]:
        current = set(states)
        for a in word:
            row = self.table[a]
            current = {row[q] for q in current}
        return frozenset(current)

    def resolve(self, letter: str | int) -> int:
        if isinstance(letter, int) and 0 <= letter < len(self.letters):
            return letter
        try:
            return self.letters.index(letter)
        except ValueError:
            raise UnknownLetter(letter) from None


@dataclass(frozen=True)
class Dvpda:
    """Complete deterministic visibly push-down automaton.

    ``delta_call[q, a] = (q', gamma)``, ``delta_int[q, b] = q'`` and
    ``delta_ret[q, d, gamma] = q'``. The return row for ``gamma == BOTTOM``
    reads the bottom symbol without popping it. ``initial`` and ``finals``
    matter only for emptiness queries.
    """

    n_states: int
    alphabet: PartitionedAlphabet
    stack: StackAlphabet
    delta_call: Mapping[tuple[int, int], tuple[int, int]] = field(default_factory=dict)
    delta_int: Mapping[tuple[int, int], int] = field(default_factory=dict)
    delta_ret: Mapping[tuple[int, int, int], int] = field(default_factory=dict)
    initial: int | None = None
    finals: frozenset[int] | None = None

    def __post_init__(self):
        if self.finals is not None:
            object.__setattr__(self, "finals", frozenset(self.finals))

    @classmethod
    def from_tables(
        cls,
        n_states: int,
        *,
        stack: Sequence[str] = ("BOT",),
        calls: Mapping[str, Sequence[tuple[int, str]]] | None = None,
        ints: Mapping[str, Sequence[int]] | None = None,
        rets: Mapping[str, Sequence[Mapping[str, int] | Sequence[int]]] | None = None,
        order: Sequence[str] | None = None,
        initial: int | None = None,
        finals: Iterable[int] | None = None,
        check: bool = True,
    ) -> Dvpda:
        """Convenience constructor from per-letter tables.

        ``calls[a][q] = (target, pushed symbol name)``, ``ints[b][q] = target``
        and ``rets[d][q]`` maps each stack symbol (by name, or positionally)
        to a target. Letters are declared calls first, then internals, then
        returns, unless ``order`` gives the declaration order explicitly.
        """
        calls, ints, rets = dict(calls or {}), dict(ints or {}), dict(rets or {})
        kinds = {a: Kind.CALL for a in calls} | {b: Kind.INT for b in ints} | {d: Kind.RET for d in rets}
        names = list(order) if order is not None else [*calls, *ints, *rets]
        alphabet = PartitionedAlphabet(names, [kinds[a] for a in names])
        gamma = StackAlphabet(stack)
        idx, sym = alphabet.index, gamma.index
        delta_call = {
            (q, idx[a]): (t, sym[g]) for a, row in calls.items() for q, (t, g) in enumerate(row)
        }
        delta_int = {(q, idx[b]): t for b, row in ints.items() for q, t in enumerate(row)}
        delta_ret = {}
        for d, row in rets.items():
            for q, entry in enumerate(row):
                pairs = entry.items() if isinstance(entry, Mapping) else zip(gamma.symbols, entry)
                for g, t in pairs:
                    delta_ret[q, idx[d], sym[g]] = t
        m = cls(n_states, alphabet, gamma, delta_call, delta_int, delta_ret, initial,
                None if finals is None else frozenset(finals))
        if check:
            validate(m)
        return m

    # compiled tables, valid only for validated automata
    @cached_property
    def table(self) -> tuple:
        """Per-letter successor table indexed by letter.

        Call letters map to ``((q', gamma) per q)``, internal letters to
        ``(q' per q)`` and return letters to ``((q' per gamma) per q)``.
        """
        n, k = self.n_states, len(self.stack)
        out = []
        for a, kind in enumerate(self.alphabet.kinds):
            if kind is Kind.CALL:
                out.append(tuple(self.delta_call[q, a] for q in range(n)))
            elif kind is Kind.INT:
                out.append(tuple(self.delta_int[q, a] for q in range(n)))
            else:
                out.append(tuple(tuple(self.delta_ret[q, a, g] for g in range(k)) for q in range(n)))
        return tuple(out)

    @property
    def kinds(self) -> tuple[Kind, ...]:
        return self.alphabet.kinds

    @property
    def letters(self) -> tuple[str, ...]:
        return self.alphabet.letters

    def encode(self, word: Iterable[str | int]) -> tuple[int, ...]:
        return tuple(self.alphabet.resolve(x) for x in word)

    def decode(self, word: Iterable[int]) -> tuple[str, ...]:
        return tuple(self.alphabet.letters[x] for x in word)

    def with_acceptance(self, initial: int | None, finals: Iterable[int] | None) -> Dvpda:
        return Dvpda(self.n_states, self.alphabet, self.stack, self.delta_call, self.delta_int,
                     self.delta_ret, initial, None if finals is None else frozenset(finals))


@dataclass(frozen=True)
class ClassReport:
    is_very_visibly: bool
    is_counter: bool
    has_call: bool
    has_return: bool


# -- operations -------------------------------------------------------------


def _letter_violations(letters: Sequence[str]) -> list[Violation]:
    out: list[Violation] = []
    seen = set()
    for a in letters:
        if a in seen:
            out.append(DuplicateLetter(a))
        seen.add(a)
        if a in RESERVED_LETTERS:
            out.append(BadPartition(a, "reserved letter name"))
        if not a or any(c.isspace() for c in a):
            out.append(BadPartition(a, "letter names must be non-empty and whitespace-free"))
    return out


def validate(m: Dvpda) -> None:
    """Raise :class:`ValidationError` listing every violated invariant."""
    out: list[Violation] = []
    n, k = m.n_states, len(m.stack)
    letters = m.alphabet.letters
    if n < 1:
        out.append(BadStructure("automaton needs at least one state"))
    if len(m.alphabet.kinds) != len(letters):
        out.append(BadStructure("every letter needs exactly one kind"))
    for a, kind in zip(letters, m.alphabet.kinds):
        if not isinstance(kind, Kind):
            out.append(BadPartition(a, f"unknown kind {kind!r}"))
    out += _letter_violations(letters)
    if k < 1 or m.stack.bottom != BOTTOM:
        out.append(BadStructure("stack alphabet must start with the bottom symbol"))
    if len(set(m.stack.symbols)) != k:
        out.append(BadStructure("duplicate stack symbol"))
    if out:
        raise ValidationError(out)

    sym = m.stack.symbols
    for a, kind in enumerate(m.alphabet.kinds):
        name = letters[a]
        for q in range(n):
            if kind is Kind.CALL:
                entry = m.delta_call.get((q, a))
                if entry is None:
                    out.append(IncompleteTransition(q, name))
                    continue
                t, g = entry
                if not 0 <= t < n:
                    out.append(BadTarget(q, name, t))
                if g == BOTTOM:
                    out.append(PushesBottom(q, name))
                elif not 0 <= g < k:
                    out.append(BadTarget(q, name, g))
            elif kind is Kind.INT:
                t = m.delta_int.get((q, a))
                if t is None:
                    out.append(IncompleteTransition(q, name))
                elif not 0 <= t < n:
                    out.append(BadTarget(q, name, t))
            else:
                for g in range(k):
                    t = m.delta_ret.get((q, a, g))
                    if t is None:
                        out.append(IncompleteTransition(q, name, sym[g]))
                    elif not 0 <= t < n:
                        out.append(BadTarget(q, name, t))
    # entries filed under a letter of the wrong kind
    kinds = m.alphabet.kinds
    for (q, a) in m.delta_call:
        if not 0 <= a < len(kinds) or kinds[a] is not Kind.CALL:
            out.append(BadPartition(str(a), "call transition on a non-call letter"))
    for (q, a) in m.delta_int:
        if not 0 <= a < len(kinds) or kinds[a] is not Kind.INT:
            out.append(BadPartition(str(a), "internal transition on a non-internal letter"))
    for (q, a, g) in m.delta_ret:
        if not 0 <= a < len(kinds) or kinds[a] is not Kind.RET:
            out.append(BadPartition(str(a), "return transition on a non-return letter"))
    if m.initial is not None and not 0 <= m.initial < n:
        out.append(BadStructure(f"initial state {m.initial} out of range"))
    if m.finals is not None and any(not 0 <= f < n for f in m.finals):
        out.append(BadStructure("final state out of range"))
    if out:
        raise ValidationError(out)


def validate_dfa(a: Dfa) -> None:
    out: list[Violation] = []
    if a.n_states < 1:
        out.append(BadStructure("automaton needs at least one state"))
    out += _letter_violations(a.letters)
    for x, name in enumerate(a.letters):
        for q in range(a.n_states):
            t = a.delta.get((q, x))
            if t is None:
                out.append(IncompleteTransition(q, name))
            elif not 0 <= t < a.n_states:
                out.append(BadTarget(q, name, t))
    if out:
        raise ValidationError(out)


def classify(m: Dvpda) -> ClassReport:
    pushed_by_letter = {}
    for (q, a), (_, g) in m.delta_call.items():
        pushed_by_letter.setdefault(a, set()).add(g)
    pushed = set().union(*pushed_by_letter.values()) if pushed_by_letter else set()
    very = all(len(s) == 1 for s in pushed_by_letter.values())
    return ClassReport(
        is_very_visibly=very,
        is_counter=very and len(pushed) <= 1,
        has_call=bool(m.alphabet.calls),
        has_return=bool(m.alphabet.rets),
    )


def embed_dfa(a: Dfa) -> Dvpda:
    """View a DFA as a DVPDA whose letters are all internal."""
    alphabet = PartitionedAlphabet(a.letters, [Kind.INT] * len(a.letters))
    return Dvpda(a.n_states, alphabet, StackAlphabet(("BOT",)), {}, dict(a.delta), {})


def cerny(n: int) -> Dfa:
    """Černý automaton: ``b`` is the cyclic shift, ``a`` merges 0 into 1."""
    shift = [(q + 1) % n for q in range(n)]
    merge = [1 if q == 0 else q for q in range(n)] if n > 1 else [0]
    return Dfa.from_tables(n, {"a": merge, "b": shift})
