"""Line-oriented text format for DVPDAs, DFAs (optionally with a subset) and transducers.

::

    dvpda                       dfa                      vst
    states 2                    states 2                 states 2
    stack BOT X                 letters x y              in a
    calls a                     t 0 x -> 1               out X Y
    ints b                      t 1 x -> 1               t 0 a -> 1 emit X
    rets d                      ...                      t 1 a -> 1 emit eps
    c 0 a -> 1 push X           subset 1
    i 0 b -> 1
    r 0 d BOT -> 0
    initial 0
    finals 0

``#`` starts a comment. The first stack symbol is the bottom symbol.
"""
from __future__ import annotations

from dataclasses import dataclass

from .automata import (
    BOTTOM,
    Dfa,
    Dvpda,
    Kind,
    PartitionedAlphabet,
    StackAlphabet,
    ValidationError,
    validate,
    validate_dfa,
)
from .reductions import DfaSubsetInstance
from .transducer import Vst


class ParseError(ValueError):
    def __init__(self, message: str, source: str = "<input>", line: int | None = None):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


@dataclass
class _Line:
    number: int
    tokens: list[str]


def _lines(text: str) -> list[_Line]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            out.append(_Line(i, tokens))
    return out


class _Reader:
    def __init__(self, text: str, source: str):
        self.source = source
        self.lines = _lines(text)
        if not self.lines:
            raise ParseError("empty file", source)

    def error(self, msg: str, line: _Line | None = None):
        return ParseError(msg, self.source, line.number if line else None)

    def int_(self, token: str, line: _Line, what: str = "state") -> int:
        try:
            value = int(token)
        except ValueError:
            raise self.error(f"expected a {what} number, got {token!r}", line) from None
        if value < 0:
            raise self.error(f"{what} numbers are non-negative", line)
        return value

    def expect_arrow(self, line: _Line, pos: int):
        if len(line.tokens) <= pos or line.tokens[pos] != "->":
            raise self.error("expected '->'", line)


def parse(text: str, source: str = "<input>"):
    """Parse any supported file; returns a Dvpda, Dfa, DfaSubsetInstance or Vst."""
    header = _Reader(text, source).lines[0]
    kind = header.tokens[0]
    if kind == "dvpda":
        return parse_dvpda(text, source)
    if kind == "dfa":
        return parse_dfa(text, source)
    if kind == "vst":
        return parse_vst(text, source)
    raise ParseError(f"unknown header {kind!r}", source, header.number)


def _check_header(r: _Reader, name: str):
    first = r.lines[0]
    if first.tokens != [name]:
        raise r.error(f"expected header {name!r}", first)


def _states_line(r: _Reader, line: _Line) -> int:
    if len(line.tokens) != 2:
        raise r.error("usage: states <count>", line)
    n = r.int_(line.tokens[1], line, "state count")
    if n < 1:
        raise r.error("need at least one state", line)
    return n


def _state(r: _Reader, token: str, line: _Line, n: int | None) -> int:
    if n is None:
        raise r.error("'states' must come before transitions", line)
    q = r.int_(token, line)
    if q >= n:
        raise r.error(f"state {q} out of range (states {n})", line)
    return q


def parse_dvpda(text: str, source: str = "<input>") -> Dvpda:
    r = _Reader(text, source)
    _check_header(r, "dvpda")
    n = None
    stack: list[str] | None = None
    letters: list[str] = []
    kinds: list[Kind] = []
    rows: list[_Line] = []
    initial = None
    finals = None
    declare = {"calls": Kind.CALL, "ints": Kind.INT, "rets": Kind.RET}
    for line in r.lines[1:]:
        head, rest = line.tokens[0], line.tokens[1:]
        if head == "states":
            n = _states_line(r, line)
        elif head == "stack":
            if not rest:
                raise r.error("stack needs at least the bottom symbol", line)
            stack = rest
        elif head in declare:
            for a in rest:
                if a in letters:
                    raise r.error(f"letter {a!r} declared twice", line)
                letters.append(a)
                kinds.append(declare[head])
        elif head in ("c", "i", "r"):
            rows.append(line)
        elif head == "initial":
            if len(rest) != 1:
                raise r.error("usage: initial <state>", line)
            initial = _state(r, rest[0], line, n)
        elif head == "finals":
            finals = frozenset(_state(r, x, line, n) for x in rest)
        else:
            raise r.error(f"unknown directive {head!r}", line)
    if n is None:
        raise r.error("missing 'states' line")
    if stack is None:
        stack = ["BOT"]
    alphabet = PartitionedAlphabet(letters, kinds)
    gamma = StackAlphabet(stack)
    sym = gamma.index
    delta_call, delta_int, delta_ret = {}, {}, {}

    def letter(token, line, kind):
        a = alphabet.index.get(token)
        if a is None:
            raise r.error(f"undeclared letter {token!r}", line)
        if alphabet.kinds[a] is not kind:
            raise r.error(f"letter {token!r} is not a {kind.value} letter", line)
        return a

    def symbol(token, line):
        g = sym.get(token)
        if g is None:
            raise r.error(f"undeclared stack symbol {token!r}", line)
        return g

    for line in rows:
        t = line.tokens
        if t[0] == "c":
            if len(t) != 7 or t[5] != "push":
                raise r.error("usage: c <state> <letter> -> <state> push <symbol>", line)
            r.expect_arrow(line, 3)
            key = (_state(r, t[1], line, n), letter(t[2], line, Kind.CALL))
            value = (_state(r, t[4], line, n), symbol(t[6], line))
            table = delta_call
        elif t[0] == "i":
            if len(t) != 5:
                raise r.error("usage: i <state> <letter> -> <state>", line)
            r.expect_arrow(line, 3)
            key = (_state(r, t[1], line, n), letter(t[2], line, Kind.INT))
            value = _state(r, t[4], line, n)
            table = delta_int
        else:
            if len(t) != 6:
                raise r.error("usage: r <state> <letter> <symbol> -> <state>", line)
            r.expect_arrow(line, 4)
            key = (_state(r, t[1], line, n), letter(t[2], line, Kind.RET), symbol(t[3], line))
            value = _state(r, t[5], line, n)
            table = delta_ret
        if key in table:
            raise r.error("duplicate transition (automaton must be deterministic)", line)
        table[key] = value
    m = Dvpda(n, alphabet, gamma, delta_call, delta_int, delta_ret, initial, finals)
    try:
        validate(m)
    except ValidationError as e:
        raise ParseError(f"invalid automaton: {e}", source) from e
    return m


def parse_dfa(text: str, source: str = "<input>"):
    """Parse a DFA; with a ``subset`` line the result is a :class:`DfaSubsetInstance`."""
    r = _Reader(text, source)
    _check_header(r, "dfa")
    n = None
    letters: list[str] = []
    rows: list[_Line] = []
    subset = None
    for line in r.lines[1:]:
        head, rest = line.tokens[0], line.tokens[1:]
        if head == "states":
            n = _states_line(r, line)
        elif head == "letters":
            for a in rest:
                if a in letters:
                    raise r.error(f"letter {a!r} declared twice", line)
                letters.append(a)
        elif head == "t":
            rows.append(line)
        elif head == "subset":
            subset = frozenset(_state(r, x, line, n) for x in rest)
            if not subset:
                raise r.error("subset must be non-empty", line)
        elif head in ("initial", "finals"):
            pass  # synchronization ignores them
        else:
            raise r.error(f"unknown directive {head!r}", line)
    if n is None:
        raise r.error("missing 'states' line")
    delta = {}
    for line in rows:
        t = line.tokens
        if len(t) != 5:
            raise r.error("usage: t <state> <letter> -> <state>", line)
        r.expect_arrow(line, 3)
        if t[2] not in letters:
            letters.append(t[2])
        key = (_state(r, t[1], line, n), letters.index(t[2]))
        if key in delta:
            raise r.error("duplicate transition", line)
        delta[key] = _state(r, t[4], line, n)
    dfa = Dfa(n, tuple(letters), delta)
    try:
        validate_dfa(dfa)
    except ValidationError as e:
        raise ParseError(f"invalid automaton: {e}", source) from e
    return dfa if subset is None else DfaSubsetInstance(dfa, subset)


def parse_vst(text: str, source: str = "<input>") -> Vst:
    r = _Reader(text, source)
    _check_header(r, "vst")
    n = None
    inputs: list[str] = []
    outputs: list[str] = []
    rows: list[_Line] = []
    for line in r.lines[1:]:
        head, rest = line.tokens[0], line.tokens[1:]
        if head == "states":
            n = _states_line(r, line)
        elif head == "in":
            inputs += rest
        elif head == "out":
            outputs += rest
        elif head == "t":
            rows.append(line)
        elif head in ("initial", "finals"):
            pass  # trace-synchronization ignores them
        else:
            raise r.error(f"unknown directive {head!r}", line)
    if n is None:
        raise r.error("missing 'states' line")
    single_chars = all(len(x) == 1 for x in outputs)
    delta = {}
    for line in rows:
        t = line.tokens
        if len(t) < 7 or t[5] != "emit":
            raise r.error("usage: t <state> <letter> -> <state> emit <output|eps>", line)
        r.expect_arrow(line, 3)
        if t[2] not in inputs:
            raise r.error(f"undeclared input letter {t[2]!r}", line)
        emitted = t[6:]
        if emitted == ["eps"]:
            out: tuple[str, ...] = ()
        elif len(emitted) == 1 and emitted[0] not in outputs and single_chars:
            out = tuple(emitted[0])
        else:
            out = tuple(emitted)
        for x in out:
            if x not in outputs:
                raise r.error(f"undeclared output letter {x!r}", line)
        key = (_state(r, t[1], line, n), t[2])
        if key in delta:
            raise r.error("duplicate transition", line)
        delta[key] = (_state(r, t[4], line, n), out)
    vst = Vst(n, tuple(inputs), tuple(outputs), delta)
    try:
        vst.check()
    except ValueError as e:
        raise ParseError(str(e), source) from e
    return vst


def read(path: str):
    with open(path, encoding="utf-8") as f:
        return parse(f.read(), source=path)


# -- writers -----------------------------------------------------------------


def format_dvpda(m: Dvpda) -> str:
    lines = ["dvpda", f"states {m.n_states}", "stack " + " ".join(m.stack.symbols)]
    for kind, word in ((Kind.CALL, "calls"), (Kind.INT, "ints"), (Kind.RET, "rets")):
        names = [m.letters[a] for a in m.alphabet.of_kind(kind)]
        if names:
            lines.append(f"{word} " + " ".join(names))
    sym = m.stack.symbols
    for a, kind in enumerate(m.kinds):
        name = m.letters[a]
        for q in range(m.n_states):
            if kind is Kind.CALL:
                t, g = m.delta_call[q, a]
                lines.append(f"c {q} {name} -> {t} push {sym[g]}")
            elif kind is Kind.INT:
                lines.append(f"i {q} {name} -> {m.delta_int[q, a]}")
            else:
                for g in range(len(sym)):
                    lines.append(f"r {q} {name} {sym[g]} -> {m.delta_ret[q, a, g]}")
    if m.initial is not None:
        lines.append(f"initial {m.initial}")
    if m.finals is not None:
        lines.append("finals " + " ".join(str(q) for q in sorted(m.finals)))
    return "\n".join(lines) + "\n"


def format_dfa(a: Dfa | DfaSubsetInstance) -> str:
    subset = None
    if isinstance(a, DfaSubsetInstance):
        a, subset = a.dfa, a.subset
    lines = ["dfa", f"states {a.n_states}", "letters " + " ".join(a.letters)]
    for x, name in enumerate(a.letters):
        for q in range(a.n_states):
            lines.append(f"t {q} {name} -> {a.delta[q, x]}")
    if subset is not None:
        lines.append("subset " + " ".join(str(q) for q in sorted(subset)))
    return "\n".join(lines) + "\n"


def format_vst(t: Vst) -> str:
    lines = ["vst", f"states {t.n_states}", "in " + " ".join(t.inputs)]
    if t.outputs:
        lines.append("out " + " ".join(t.outputs))
    for letter in t.inputs:
        for q in range(t.n_states):
            target, out = t.delta[q, letter]
            lines.append(f"t {q} {letter} -> {target} emit {' '.join(out) if out else 'eps'}")
    return "\n".join(lines) + "\n"


def format_any(obj) -> str:
    if isinstance(obj, Dvpda):
        return format_dvpda(obj)
    if isinstance(obj, Vst):
        return format_vst(obj)
    return format_dfa(obj)
