"""Acceptance criteria 1-8, one test (or one test per law) each.

Every test records a PASS/FAIL line that is printed in the terminal summary
and also prints it immediately.
"""
import functools
import random
import time
from collections import Counter

import pytest
from conftest import ACCEPTANCE
from gen import (
    accepted_words_bfs,
    collapse_to_dfa,
    exhaustive_dvpdas,
    exhaustive_subset_instances,
    exhaustive_vsts,
    random_dvpda,
    random_shape,
    random_subset_instance,
    with_check_letter,
)

from visync.automata import cerny, classify, embed_dfa
from visync.emptiness import AcceptanceMode, ExplicitDvpda, is_empty
from visync.oracle import oracle_search, oracle_table, trace_sync_search
from visync.reductions import (
    reduce_from_subset_to_arb,
    reduce_from_subset_to_zero_turn,
    reduce_into_subset_to_nturn_dvca,
    reduce_into_subset_to_same,
    solve_from_subset,
    solve_into_subset,
)
from visync.semantics import SyncModel, check_witness
from visync.sync import decide_sync, dfa_pair_sync, sync_empty_pairwise
from visync.transducer import classify_vst, trace_sync_vst, trace_sync_vvst

E, S, A = SyncModel.EMPTY, SyncModel.SAME, SyncModel.ARBITRARY
BOUNDS = (None, 0, 1, 2)
DEPTH = 10


def record(name, mismatches, checked, extra=""):
    ok = not mismatches
    detail = f"{checked} checks, {len(mismatches)} mismatches{extra}"
    if mismatches:
        detail += f"; first: {mismatches[0]}"
    ACCEPTANCE[name] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {name}: {detail}")
    assert ok, detail


# -- shared instance families -------------------------------------------------

# two-state shapes (calls, ints, rets); the larger stack alphabet only where the
# table count stays in the low thousands
SHAPES_ONE_SYMBOL = [(c, i, r) for c in range(3) for i in range(3) for r in range(3) if 1 <= c + i + r <= 3]
SHAPES_TWO_SYMBOLS = [(1, 1, 1), (1, 0, 1), (0, 1, 1), (1, 1, 0), (1, 2, 0), (0, 2, 1), (1, 0, 0), (0, 0, 1)]


def exhaustive_family():
    for shape in SHAPES_ONE_SYMBOL:
        yield from exhaustive_dvpdas(*shape, 1)
    for shape in SHAPES_TWO_SYMBOLS:
        yield from exhaustive_dvpdas(*shape, 2)


def random_family(count=500, seed=0):
    rng = random.Random(seed)
    return [random_dvpda(rng, *random_shape(rng, max_states=4)) for _ in range(count)]


@functools.lru_cache(maxsize=None)
def dispatch_run():
    """Decisions and oracle answers for every (instance, model, bound) of criterion 1."""
    rows = []
    for m in [*exhaustive_family(), *random_family()]:
        table = oracle_table(m, SyncModel, BOUNDS, limit=DEPTH)
        for (model, n), res in table.items():
            rows.append((m, model, n, decide_sync(m, model, n), res))
    return rows


def describe(m, model, n):
    return f"{model.value} n={n} {m.letters} {dict(m.delta_call)} {dict(m.delta_int)} {dict(m.delta_ret)}"


# -- criterion 1 --------------------------------------------------------------


def test_criterion_1_dispatch_against_oracle():
    start = time.perf_counter()
    rows = dispatch_run()
    bad = []
    for m, model, n, d, res in rows:
        if d.answer != res.found:
            bad.append(f"decision {d.answer} ({d.procedure}) vs oracle {res.outcome.value}: {describe(m, model, n)}")
    record("1 dispatch", bad, len(rows), f", {len({id(r[0]) for r in rows})} instances,"
           f" {time.perf_counter() - start:.0f}s")


# -- criterion 2 --------------------------------------------------------------


def test_criterion_2_witnesses_replay():
    bad, checked = [], 0
    for m, model, n, d, _ in dispatch_run():
        if d.answer:
            checked += 1
            if d.witness is None or not check_witness(m, d.witness, model, n):
                bad.append(f"{d.witness}: {describe(m, model, n)}")
    record("2 witnesses", bad, checked)


# -- criterion 3 --------------------------------------------------------------


def random_class(predicate, count=500, seed=0, **kw):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = random_dvpda(rng, *random_shape(rng, max_states=4), **kw)
        if predicate(m):
            out.append(m)
    return out


def test_criterion_3_same_equals_empty_with_returns():
    family = random_class(lambda m: classify(m).has_return, seed=31)
    bad = [describe(m, S, None) for m in family if decide_sync(m, S).answer != decide_sync(m, E).answer]
    record("3.1 same=empty with returns", bad, len(family))


def test_criterion_3_arbitrary_without_returns_is_dfa_sync():
    family = random_class(lambda m: not classify(m).has_return, seed=32)
    bad = [describe(m, A, None) for m in family
           if decide_sync(m, A).answer != dfa_pair_sync(collapse_to_dfa(m)).answer]
    record("3.2 arbitrary without returns", bad, len(family))


def test_criterion_3_very_visibly_models_coincide():
    family = random_class(lambda m: True, seed=33, very_visibly=True)
    bad = []
    for m in family:
        answers = {model: decide_sync(m, model).answer for model in SyncModel}
        if len(set(answers.values())) != 1:
            kind = "with returns" if classify(m).has_return else "no returns"
            bad.append(f"{kind} {answers}: {describe(m, E, None)}")
    no_ret = sum(1 for m in family if not classify(m).has_return)
    record("3.3 very visibly models coincide", bad, len(family), f" ({no_ret} instances without returns)")


def test_criterion_3_model_chain():
    family = random_class(lambda m: True, seed=34)
    bad, checked = [], 0
    for m in family:
        for n in BOUNDS:
            e, s, a = (decide_sync(m, model, n).answer for model in (E, S, A))
            checked += 1
            if (e and not s) or (s and not a):
                bad.append(f"n={n} empty={e} same={s} arb={a}: {describe(m, E, n)}")
    record("3.4 model chain", bad, checked)


def test_criterion_3_turn_monotonicity():
    family = random_class(lambda m: True, seed=35)
    bad, checked = [], 0
    for m in family:
        for model in SyncModel:
            answers = [decide_sync(m, model, n).answer for n in (0, 1, 2, 3, None)]
            checked += 1
            if any(x and not y for x, y in zip(answers, answers[1:])):
                bad.append(f"{answers}: {describe(m, model, None)}")
    record("3.5 turn monotonicity", bad, checked)


# -- criterion 4 --------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def subset_family():
    rng = random.Random(4)
    family = list(exhaustive_subset_instances(3, 2))
    family += [random_subset_instance(rng, 5, 2) for _ in range(200)]
    return [(i, solve_into_subset(i)[0], solve_from_subset(i)[0]) for i in family]


def test_criterion_4a_into_subset_same():
    bad = [str(i) for i, into, _ in subset_family()
           if decide_sync(reduce_into_subset_to_same(i), S).answer != into]
    record("4a into-subset to same", bad, len(subset_family()))


def test_criterion_4b_from_subset_arbitrary():
    bad = [str(i) for i, _, frm in subset_family()
           if decide_sync(reduce_from_subset_to_arb(i), A).answer != frm]
    record("4b from-subset to arbitrary", bad, len(subset_family()))


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("model", list(SyncModel), ids=lambda m: m.value)
def test_criterion_4c_into_subset_n_turn_counter(n, model):
    bad = []
    for i, into, _ in subset_family():
        got = decide_sync(reduce_into_subset_to_nturn_dvca(i, n), model, n).answer
        if got != into:
            bad.append(f"solver {into} decision {got}: {i}")
    record(f"4c into-subset to {n}-turn counter, {model.value}", bad, len(subset_family()))


@pytest.mark.parametrize("model", [S, A], ids=lambda m: m.value)
def test_criterion_4d_from_subset_zero_turn(model):
    bad = [str(i) for i, _, frm in subset_family()
           if decide_sync(reduce_from_subset_to_zero_turn(i), model, 0).answer != frm]
    record(f"4d from-subset to zero-turn counter, {model.value}", bad, len(subset_family()))


# -- criterion 5 --------------------------------------------------------------


def test_criterion_5_cerny_lengths():
    bad = []
    for n, expected in ((3, 4), (4, 9)):
        res = oracle_search(embed_dfa(cerny(n)), E, limit=expected + 1)
        got = len(res.word) if res.found else None
        if got != expected:
            bad.append(f"n={n}: {got} != {expected}")
    record("5 cerny shortest words", bad, 2)


# -- criterion 6 --------------------------------------------------------------


def test_criterion_6_emptiness_against_enumeration():
    rng = random.Random(6)
    bad, checked, beyond = [], 0, 0
    for _ in range(500):
        m = random_dvpda(rng, *random_shape(rng, max_states=4), acceptance=True)
        if not m.finals:
            m = random_dvpda(rng, *random_shape(rng, max_states=4), acceptance=True)
        auto = ExplicitDvpda(m)
        for mode, empty_stack in ((AcceptanceMode.FINAL_STATE, False),
                                  (AcceptanceMode.FINAL_STATE_EMPTY_STACK, True)):
            checked += 1
            empty = is_empty(auto, mode)
            word = accepted_words_bfs(m, DEPTH, empty_stack)
            if word is not None and empty:
                bad.append(f"{mode.value}: missed {word}")
            if word is None and not empty:
                beyond += 1  # consistent only if the shortest word is longer
                if accepted_words_bfs(m, 4 * DEPTH, empty_stack) is None:
                    bad.append(f"{mode.value}: no word found at all")
        checked += 1
        augmented = with_check_letter(m)
        if is_empty(auto, AcceptanceMode.FINAL_STATE_EMPTY_STACK) != is_empty(
                ExplicitDvpda(augmented), AcceptanceMode.FINAL_STATE):
            bad.append("check-letter augmentation disagrees")
    record("6 emptiness", bad, checked, f", {beyond} with shortest word beyond {DEPTH}")


# -- criterion 7 --------------------------------------------------------------


def test_criterion_7_pair_rounds():
    bad, checked = [], 0
    for m in [*exhaustive_family(), *random_family(seed=7)]:
        d = sync_empty_pairwise(m)
        if d.answer:
            checked += 1
            if d.stats["rounds"] > m.n_states - 1:
                bad.append(f"{d.stats['rounds']} rounds for {m.n_states} states")
    record("7 pair rounds", bad, checked)


# -- criterion 8 --------------------------------------------------------------


def test_criterion_8_transducers():
    bad, checked, very = [], 0, 0
    for k in (1, 2):
        for t in exhaustive_vsts(k):
            c = classify_vst(t)
            if not c.is_visibly:
                continue
            checked += 1
            d = trace_sync_vst(t)
            if d.answer != (trace_sync_search(t, 8) is not None):
                bad.append(f"definitional disagreement: {t.delta}")
            if c.is_very_visibly:
                very += 1
                if trace_sync_vvst(t).answer != d.answer:
                    bad.append(f"vvst disagreement: {t.delta}")
    record("8 transducers", bad, checked, f" ({very} very visibly)")
