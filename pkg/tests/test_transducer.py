import itertools

import pytest
from gen import exhaustive_vsts

from visync.automata import Kind
from visync.oracle import oracle_search, trace_sync_search
from visync.semantics import SyncModel
from visync.transducer import (
    NotVeryVisibly,
    NotVisibly,
    Vst,
    classify_vst,
    output_free_dfa,
    trace_sync_vst,
    trace_sync_vvst,
    vst_to_dvpda,
)

VST1 = Vst.from_tables(2, {"a": [(1, "X"), (1, "X")]})
VST2 = Vst.from_tables(2, {"a": [(1, "X"), (1, "Y")]})
UNEVEN = Vst.from_tables(2, {"a": [(1, "XX"), (1, "Y")]})


@pytest.mark.parametrize("t, visibly, very", [
    (VST1, True, True),
    (VST2, True, False),
    (UNEVEN, False, False),
])
def test_classify(t, visibly, very):
    c = classify_vst(t)
    assert (c.is_visibly, c.is_very_visibly) == (visibly, very)


def test_to_dvpda_shape():
    m = vst_to_dvpda(VST1)
    assert m.kinds == (Kind.CALL,) and m.stack.symbols == ("BOT", "X")
    assert oracle_search(m, SyncModel.SAME, limit=4).word == ("a",)
    m2 = vst_to_dvpda(VST2)
    assert m2.stack.symbols == ("BOT", "X", "Y")
    assert not oracle_search(m2, SyncModel.SAME, limit=8).found


def test_empty_outputs_become_internal():
    t = Vst.from_tables(2, {"a": [(1, ""), (1, "")]})
    assert vst_to_dvpda(t).kinds == (Kind.INT,)


def test_not_visibly():
    with pytest.raises(NotVisibly):
        vst_to_dvpda(UNEVEN)
    with pytest.raises(NotVisibly):
        trace_sync_vst(UNEVEN)


def test_trace_sync_examples():
    d = trace_sync_vst(VST1)
    assert d.answer and d.witness == ("a",)
    assert not trace_sync_vst(VST2).answer
    one = Vst.from_tables(1, {"a": [(0, "X")]})
    d = trace_sync_vst(one)
    assert d.answer and d.witness == ()


def test_vvst():
    d = trace_sync_vvst(VST1)
    assert d.answer and d.witness == ("a",) and d.procedure == "vvst-pair"
    with pytest.raises(NotVeryVisibly):
        trace_sync_vvst(VST2)


def test_output_free_dfa():
    dfa = output_free_dfa(VST2)
    assert dfa.n_states == 2 and dfa.letters == ("a",)


def test_check_rejects_bad_tables():
    with pytest.raises(ValueError):
        Vst(2, ("a",), ("X",), {(0, "a"): (1, ("X",))}).check()
    with pytest.raises(ValueError):
        Vst(1, ("a",), ("X",), {(0, "a"): (0, ("Z",))}).check()


def _run(t, q, word):
    out = ()
    for a in word:
        q, w = t.delta[q, a]
        out += w
    return out


VERY = [t for t in exhaustive_vsts(1) if classify_vst(t).is_very_visibly]


@pytest.mark.parametrize("t", VERY[:60])
def test_very_visibly_outputs_independent_of_state(t):
    for k in range(4):
        for word in itertools.product(t.inputs, repeat=k):
            assert len({_run(t, q, word) for q in range(t.n_states)}) == 1


@pytest.mark.parametrize("t", [t for t in exhaustive_vsts(1) if classify_vst(t).is_visibly][:80])
def test_agrees_with_simulation(t):
    d = trace_sync_vst(t)
    w = trace_sync_search(t, 8)
    assert d.answer == (w is not None)
    if d.answer:
        runs = {(_end(t, q, d.witness), _run(t, q, d.witness)) for q in range(t.n_states)}
        assert len(runs) == 1


def _end(t, q, word):
    for a in word:
        q = t.delta[q, a][0]
    return q
