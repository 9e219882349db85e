import json
import os
import subprocess
import sys

import pytest
from conftest import identity_dvpda

from visync.automata import Dfa, cerny
from visync.cli import BUDGET_ENV, main
from visync.fileformat import format_dfa, format_dvpda, format_vst, read
from visync.reductions import DfaSubsetInstance
from visync.transducer import Vst


@pytest.fixture
def m1_path(fixtures_dir):
    return os.path.join(fixtures_dir, "m1.dvpda")


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_check_m1_empty(capsys, m1_path):
    code, out, _ = call(capsys, "check", "--model", "empty", m1_path)
    assert code == 0
    assert out == "answer yes\nprocedure pairwise-empty\nwitness a d\n"


def test_check_m1_zero_turns(capsys, m1_path):
    code, out, _ = call(capsys, "check", "--model", "empty", "--turns", "0", m1_path)
    assert code == 1 and out.splitlines()[0] == "answer no"


def test_missing_file_argument(capsys):
    code, _, err = call(capsys, "check", "--model", "empty")
    assert code == 2 and "usage" in err


@pytest.mark.parametrize("argv", [
    ["check", "--model", "nope", "x"],
    ["check", "--model", "same", "--turns", "-1", "x"],
    ["check", "--model", "same", "--turns", "two", "x"],
    ["frobnicate"],
])
def test_bad_flags(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_witness_command(capsys, m1_path):
    code, out, _ = call(capsys, "witness", "--model", "arbitrary", "--turns", "0", m1_path)
    assert code == 0 and out == "witness a\n"


def test_json_mirrors_text(capsys, m1_path):
    code, out, _ = call(capsys, "check", "--model", "empty", "--format", "json", m1_path)
    assert code == 0
    assert json.loads(out) == {"answer": "yes", "procedure": "pairwise-empty", "witness": ["a", "d"]}


def test_output_is_reproducible(capsys, m1_path):
    first = call(capsys, "check", "--model", "same", m1_path)
    assert call(capsys, "check", "--model", "same", m1_path) == first
    assert "stats" not in first[1]


def test_verbose_stats(capsys, m1_path):
    _, out, _ = call(capsys, "check", "--model", "empty", "--verbose", m1_path)
    assert any(line.startswith("stats explored ") for line in out.splitlines())


def test_classify(capsys, m1_path):
    code, out, _ = call(capsys, "classify", m1_path)
    assert code == 0
    assert out == "very-visibly yes\ncounter yes\nhas-call yes\nhas-return yes\n"


def test_parse_error_position(capsys, tmp_path):
    path = write(tmp_path, "bad.dvpda", "dvpda\nstates two\n")
    code, _, err = call(capsys, "check", "--model", "same", path)
    assert code == 2 and f"{path}:2:" in err


def test_wrong_file_kind(capsys, tmp_path):
    path = write(tmp_path, "c.dfa", format_dfa(cerny(3)))
    assert call(capsys, "check", "--model", "same", path)[0] == 2


def test_empty_command(capsys, tmp_path, m1):
    from dataclasses import replace
    m = replace(m1, initial=0, finals=frozenset({1}))
    path = write(tmp_path, "a.dvpda", format_dvpda(m))
    code, out, _ = call(capsys, "empty", path)
    assert code == 0 and out == "empty no\nwitness b\n"
    code, out, _ = call(capsys, "empty", "--mode", "final-empty-stack", path)
    assert code == 0 and out.startswith("empty no")
    assert call(capsys, "empty", write(tmp_path, "b.dvpda", format_dvpda(m1)))[0] == 2


def test_empty_command_no(capsys, tmp_path):
    from dataclasses import replace
    m = replace(identity_dvpda(2), initial=0, finals=frozenset({1}))
    code, out, _ = call(capsys, "empty", write(tmp_path, "i.dvpda", format_dvpda(m)))
    assert code == 1 and out == "empty yes\n"


def test_oracle_command(capsys, m1_path, tmp_path):
    code, out, _ = call(capsys, "oracle", "--model", "empty", "--max-len", "4", m1_path)
    assert code == 0 and out == "outcome found\nwitness a d\n"
    ident = write(tmp_path, "i.dvpda", format_dvpda(identity_dvpda(2)))
    code, out, _ = call(capsys, "oracle", "--model", "same", "--max-len", "6", ident)
    assert code == 1 and out.splitlines()[-1] == "limit 6"
    code, out, _ = call(capsys, "oracle", "--model", "same", "--budget", "1", ident)
    assert code == 3


def test_budget_flag_beats_environment(capsys, monkeypatch, tmp_path):
    ident = write(tmp_path, "i.dvpda", format_dvpda(identity_dvpda(2)))
    monkeypatch.setenv(BUDGET_ENV, "1")
    assert call(capsys, "oracle", "--model", "same", "--max-len", "4", ident)[0] == 3
    assert call(capsys, "oracle", "--model", "same", "--max-len", "4", "--budget", "100000", ident)[0] == 1
    assert call(capsys, "check", "--model", "same", "--turns", "1", ident)[0] == 3
    monkeypatch.setenv(BUDGET_ENV, "lots")
    assert call(capsys, "check", "--model", "same", ident)[0] == 2


@pytest.mark.parametrize("reduction, turns", [("thm2", None), ("thm3", None), ("thm8", "2"), ("thm10", None)])
def test_generate_round_trip(capsys, tmp_path, reduction, turns):
    inst = DfaSubsetInstance(Dfa(3, ("x", "y"), cerny(3).delta), frozenset({0, 1}))
    src = write(tmp_path, "in.dfa", format_dfa(inst))
    dst = str(tmp_path / "out.dvpda")
    argv = ["generate", "--reduction", reduction, src, dst]
    if turns:
        argv[3:3] = ["--turns", turns]
    code, out, _ = call(capsys, *argv)
    assert code == 0 and out.startswith(f"generated {dst}")
    m = read(dst)
    assert call(capsys, "check", "--model", "same", dst)[0] in (0, 1)
    assert m.n_states >= 3


def test_generate_flag_rules(capsys, tmp_path):
    inst = DfaSubsetInstance(Dfa(2, ("x",), {(0, 0): 1, (1, 0): 1}), frozenset({1}))
    src = write(tmp_path, "in.dfa", format_dfa(inst))
    dst = str(tmp_path / "o")
    assert call(capsys, "generate", "--reduction", "thm8", src, dst)[0] == 2
    assert call(capsys, "generate", "--reduction", "thm8", "--turns", "0", src, dst)[0] == 2
    assert call(capsys, "generate", "--reduction", "thm2", "--turns", "1", src, dst)[0] == 2
    plain = write(tmp_path, "plain.dfa", format_dfa(inst.dfa))
    assert call(capsys, "generate", "--reduction", "thm2", plain, dst)[0] == 2


def test_trace_sync(capsys, tmp_path):
    vst1 = Vst.from_tables(2, {"a": [(1, "X"), (1, "X")]})
    code, out, _ = call(capsys, "trace-sync", write(tmp_path, "t.vst", format_vst(vst1)))
    assert code == 0 and "witness a" in out
    vst2 = Vst.from_tables(2, {"a": [(1, "X"), (1, "Y")]})
    assert call(capsys, "trace-sync", write(tmp_path, "u.vst", format_vst(vst2)))[0] == 1
    bad = Vst.from_tables(2, {"a": [(1, "XX"), (1, "Y")]})
    assert call(capsys, "trace-sync", write(tmp_path, "v.vst", format_vst(bad)))[0] == 2


def test_console_entry_point(m1_path):
    proc = subprocess.run([sys.executable, "-m", "visync.cli", "check", "--model", "empty", m1_path],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("answer yes")
