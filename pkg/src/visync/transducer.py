"""Visibly sequential transducers and trace-synchronization.

A word trace-synchronizes a transducer if all start states end in one state
having written the same output. For visibly transducers (every letter emits
words of one fixed length) this is same-stack synchronization of a
return-free DVPDA whose stack records the output.
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

from .automata import Dfa, Dvpda, Kind, PartitionedAlphabet, StackAlphabet, validate
from .emptiness import DEFAULT_BUDGET
from .semantics import SyncModel
from .sync import Decision, decide_sync, dfa_pair_sync


class NotVisibly(ValueError):
    pass


class NotVeryVisibly(ValueError):
    pass


@dataclass(frozen=True)
class Vst:
    """Sequential transducer; ``delta[q, letter] = (target, output tuple)``."""

    n_states: int
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    delta: Mapping[tuple[int, str], tuple[int, tuple[str, ...]]]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @classmethod
    def from_tables(cls, n_states: int, tables: Mapping[str, Sequence[tuple[int, Sequence[str] | str]]],
                    outputs: Sequence[str] | None = None) -> Vst:
        """Build from ``{letter: [(target, output) per state]}``.

        Outputs given as plain strings are split into single characters.
        """
        delta = {}
        seen = []
        for letter, row in tables.items():
            for q, (target, out) in enumerate(row):
                out = tuple(out)
                delta[q, letter] = (target, out)
                seen += [x for x in out if x not in seen]
        vst = cls(n_states, tuple(tables), tuple(outputs) if outputs is not None else tuple(seen), delta)
        vst.check()
        return vst

    def check(self) -> None:
        if self.n_states < 1:
            raise ValueError("transducer needs at least one state")
        if len(set(self.inputs)) != len(self.inputs):
            raise ValueError("duplicate input letter")
        for q in range(self.n_states):
            for letter in self.inputs:
                if (q, letter) not in self.delta:
                    raise ValueError(f"missing transition for state {q} on {letter!r}")
                target, out = self.delta[q, letter]
                if not 0 <= target < self.n_states:
                    raise ValueError(f"transition ({q}, {letter!r}) leads out of range")
                if any(x not in self.outputs for x in out):
                    raise ValueError(f"transition ({q}, {letter!r}) emits an undeclared letter")

    @cached_property
    def outputs_of(self) -> dict[str, set[tuple[str, ...]]]:
        return {a: {self.delta[q, a][1] for q in range(self.n_states)} for a in self.inputs}


@dataclass(frozen=True)
class VstClass:
    is_visibly: bool
    is_very_visibly: bool


def classify_vst(t: Vst) -> VstClass:
    outs = t.outputs_of.values()
    return VstClass(
        is_visibly=all(len({len(w) for w in words}) == 1 for words in outs),
        is_very_visibly=all(len(words) == 1 for words in outs),
    )


def _symbol_name(word: tuple[str, ...]) -> str:
    return "+".join(word)


def vst_to_dvpda(t: Vst) -> Dvpda:
    """Return-free DVPDA whose stack symbols are the non-empty output words.

    A letter whose outputs are all empty becomes internal, any other letter
    a call pushing its output word as one symbol.
    """
    if not classify_vst(t).is_visibly:
        raise NotVisibly("output lengths differ between states for some letter")
    kinds = tuple(Kind.INT if t.outputs_of[a] == {()} else Kind.CALL for a in t.inputs)
    words: list[tuple[str, ...]] = []
    for a in t.inputs:
        for q in range(t.n_states):
            w = t.delta[q, a][1]
            if w and w not in words:
                words.append(w)
    symbol = {w: i + 1 for i, w in enumerate(words)}
    delta_call, delta_int = {}, {}
    for i, (a, kind) in enumerate(zip(t.inputs, kinds)):
        for q in range(t.n_states):
            target, w = t.delta[q, a]
            if kind is Kind.CALL:
                delta_call[q, i] = (target, symbol[w])
            else:
                delta_int[q, i] = target
    stack = StackAlphabet(("BOT", *(_symbol_name(w) for w in words)))
    m = Dvpda(t.n_states, PartitionedAlphabet(t.inputs, kinds), stack, delta_call, delta_int, {})
    validate(m)
    return m


def trace_sync_vst(t: Vst, budget: int = DEFAULT_BUDGET) -> Decision:
    return decide_sync(vst_to_dvpda(t), SyncModel.SAME, budget=budget)


def output_free_dfa(t: Vst) -> Dfa:
    delta = {(q, i): t.delta[q, a][0] for i, a in enumerate(t.inputs) for q in range(t.n_states)}
    return Dfa(t.n_states, t.inputs, delta)


def trace_sync_vvst(t: Vst) -> Decision:
    """All states emit the same output for each letter, so only states matter."""
    if not classify_vst(t).is_very_visibly:
        raise NotVeryVisibly("some letter emits different words from different states")
    return dfa_pair_sync(output_free_dfa(t), procedure="vvst-pair")
