"""``visync`` command line.

Exit codes: 0 yes / ok, 1 no / nothing found within the limit, 2 usage or
parse error, 3 state budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .automata import Dfa, Dvpda, classify
from .emptiness import (
    DEFAULT_BUDGET,
    AcceptanceMode,
    ExplicitDvpda,
    StateBudgetExceeded,
    WitnessTooLong,
    check_emptiness,
)
from .fileformat import ParseError, format_dvpda, parse_dvpda, read
from .oracle import DEFAULT_BUDGET as ORACLE_BUDGET
from .oracle import DEFAULT_LIMIT, Outcome, oracle_search
from .reductions import REDUCTIONS, DfaSubsetInstance
from .semantics import SyncModel
from .sync import WITNESS_LIMIT, decide_sync
from .transducer import NotVisibly, Vst, trace_sync_vst

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
BUDGET_ENV = "VISYNC_BUDGET"


class UsageError(Exception):
    pass


def _turns(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _model(text: str) -> SyncModel:
    try:
        return SyncModel.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown model {text!r} (empty, same, arbitrary)") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--verbose", action="store_true", help="also print statistics")
    common.add_argument("--budget", type=_turns, default=None,
                        help=f"state budget (default ${BUDGET_ENV} or {DEFAULT_BUDGET})")

    p = argparse.ArgumentParser(prog="visync", description="Synchronizing words for visibly push-down automata.")
    sub = p.add_subparsers(dest="command", required=True)

    for name, help_ in (("check", "decide synchronizability"),
                        ("witness", "print only a synchronizing word")):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("--model", type=_model, required=True)
        c.add_argument("--turns", type=_turns, default=None)
        c.add_argument("file")

    c = sub.add_parser("classify", parents=[common], help="report structural class")
    c.add_argument("file")

    c = sub.add_parser("empty", parents=[common], help="emptiness of an automaton with initial/finals")
    c.add_argument("--mode", choices=[x.value for x in AcceptanceMode], default=AcceptanceMode.FINAL_STATE.value)
    c.add_argument("file")

    c = sub.add_parser("oracle", parents=[common], help="bounded brute-force shortest synchronizing word")
    c.add_argument("--model", type=_model, required=True)
    c.add_argument("--turns", type=_turns, default=None)
    c.add_argument("--max-len", type=_turns, default=DEFAULT_LIMIT)
    c.add_argument("file")

    c = sub.add_parser("generate", parents=[common], help="build a DVPDA from a DFA-with-subset file")
    c.add_argument("--reduction", choices=sorted(REDUCTIONS), required=True)
    c.add_argument("--turns", type=_turns, default=None)
    c.add_argument("input")
    c.add_argument("output")

    c = sub.add_parser("trace-sync", parents=[common], help="trace-synchronization of a visibly transducer")
    c.add_argument("file")
    return p


def _budget(args) -> int | None:
    """Flag, then environment; ``None`` lets each command use its own default."""
    if args.budget is not None:
        return args.budget
    env = os.environ.get(BUDGET_ENV)
    if env is None:
        return None
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be a non-negative integer, got {env!r}") from None
    if value < 0:
        raise UsageError(f"{BUDGET_ENV} must be a non-negative integer, got {env!r}")
    return value


def _load(path: str, want: type):
    obj = read(path)
    if not isinstance(obj, want):
        raise UsageError(f"{path}: expected a {want.__name__.lower()} file")
    return obj


def _decision_fields(d, verbose: bool, only_witness: bool = False) -> dict:
    out = {} if only_witness else {"answer": "yes" if d.answer else "no", "procedure": d.procedure}
    if d.answer:
        if d.witness is not None:
            out["witness"] = list(d.witness)
        else:
            out["witness-length"] = d.witness_length
    if verbose:
        out["stats"] = dict(sorted(d.stats.items()))
    return out


def _cmd_check(args, budget):
    m = _load(args.file, Dvpda)
    d = decide_sync(m, args.model, args.turns, budget=budget)
    return (EXIT_YES if d.answer else EXIT_NO), _decision_fields(d, args.verbose, args.command == "witness")


def _cmd_classify(args, budget):
    r = classify(_load(args.file, Dvpda))
    fields = {
        "very-visibly": r.is_very_visibly,
        "counter": r.is_counter,
        "has-call": r.has_call,
        "has-return": r.has_return,
    }
    return EXIT_YES, fields


def _cmd_empty(args, budget):
    m = _load(args.file, Dvpda)
    if m.initial is None or m.finals is None:
        raise UsageError(f"{args.file}: emptiness needs 'initial' and 'finals' lines")
    mode = AcceptanceMode(args.mode)
    res = check_emptiness(ExplicitDvpda(m), mode, budget)
    out = {"empty": "yes" if res.empty else "no"}
    if not res.empty:
        try:
            out["witness"] = list(m.decode(res.witness.expand(WITNESS_LIMIT)))
        except WitnessTooLong as e:
            out["witness-length"] = e.length
    if args.verbose:
        out["stats"] = {"explored": res.explored}
    # exit 0 means a word is accepted
    return (EXIT_NO if res.empty else EXIT_YES), out


def _cmd_oracle(args, budget):
    m = _load(args.file, Dvpda)
    r = oracle_search(m, args.model, args.turns, limit=args.max_len, budget=ORACLE_BUDGET if budget is None else budget)
    out = {"outcome": r.outcome.value}
    if r.found:
        out["witness"] = list(r.word)
    else:
        out["limit"] = r.limit
    if args.verbose:
        out["stats"] = {"explored": r.explored}
    code = {Outcome.FOUND: EXIT_YES, Outcome.NONE_WITHIN: EXIT_NO, Outcome.BUDGET_EXCEEDED: EXIT_BUDGET}
    return code[r.outcome], out


def _cmd_generate(args, budget):
    inst = read(args.input)
    if isinstance(inst, Dfa):
        raise UsageError(f"{args.input}: generation needs a 'subset' line")
    if not isinstance(inst, DfaSubsetInstance):
        raise UsageError(f"{args.input}: expected a dfa file with a subset")
    build = REDUCTIONS[args.reduction]
    if args.reduction == "thm8":
        if args.turns is None or args.turns < 1:
            raise UsageError("--reduction thm8 needs --turns n with n >= 1")
        m = build(inst, args.turns)
    else:
        if args.turns is not None:
            raise UsageError(f"--turns is meaningless for --reduction {args.reduction}")
        m = build(inst)
    text = format_dvpda(m)
    parse_dvpda(text, args.output)  # generated files must re-parse
    with open(args.output, "w", encoding="utf-8") as f:
        f.write(text)
    return EXIT_YES, {"generated": args.output, "states": m.n_states}


def _cmd_trace_sync(args, budget):
    t = _load(args.file, Vst)
    d = trace_sync_vst(t, budget=budget)
    return (EXIT_YES if d.answer else EXIT_NO), _decision_fields(d, args.verbose)


COMMANDS = {
    "check": _cmd_check,
    "witness": _cmd_check,
    "classify": _cmd_classify,
    "empty": _cmd_empty,
    "oracle": _cmd_oracle,
    "generate": _cmd_generate,
    "trace-sync": _cmd_trace_sync,
}


def _text(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list):
        return " ".join(value)
    return str(value)


def _emit(fields: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(fields, sort_keys=False) + "\n")
        return
    for key, value in fields.items():
        if key == "stats":
            for k, v in value.items():
                out.write(f"stats {k} {v}\n")
        else:
            out.write(f"{key} {_text(value)}".rstrip() + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_YES
    try:
        budget = _budget(args)
        if args.command != "oracle" and budget is None:
            budget = DEFAULT_BUDGET
        code, fields = COMMANDS[args.command](args, budget)
    except (UsageError, ParseError, NotVisibly, OSError) as e:
        print(f"visync: {e}", file=sys.stderr)
        return EXIT_USAGE
    except StateBudgetExceeded as e:
        print(f"visync: {e}", file=sys.stderr)
        return EXIT_BUDGET
    _emit(fields, args.format, sys.stdout)
    return code


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
