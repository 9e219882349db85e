import itertools
import random

import pytest
from conftest import identity_dvpda
from gen import random_dvpda, random_shape

from visync.oracle import Outcome, oracle_search, oracle_table
from visync.semantics import SyncModel, check_witness


def test_m1_empty(m1):
    r = oracle_search(m1, "empty", limit=4)
    assert r.outcome is Outcome.FOUND and r.word == ("a", "d")


def test_m1_arbitrary(m1):
    assert oracle_search(m1, "arbitrary", limit=4).word == ("a",)


@pytest.mark.parametrize("model", list(SyncModel))
@pytest.mark.parametrize("n", [None, 0, 2])
def test_identity_none_within(model, n):
    r = oracle_search(identity_dvpda(), model, n, limit=6)
    assert r.outcome is Outcome.NONE_WITHIN and r.limit == 6


def test_budget_is_a_value(m1):
    r = oracle_search(identity_dvpda(), "same", limit=10, budget=3)
    assert r.outcome is Outcome.BUDGET_EXCEEDED


def test_negative_limit():
    with pytest.raises(ValueError):
        oracle_search(identity_dvpda(), "same", limit=-1)


def _shortest_by_enumeration(m, model, n, limit):
    for k in range(limit + 1):
        for w in itertools.product(m.letters, repeat=k):
            if check_witness(m, w, model, n):
                return w
    return None


@pytest.mark.parametrize("seed", range(40))
def test_shortest_and_least(seed):
    rng = random.Random(seed)
    n_states, c, i, r, s = random_shape(rng, max_states=3)
    m = random_dvpda(rng, n_states, min(c, 1), min(i, 1), min(r, 1) or (0 if c or i else 1), s)
    for model in SyncModel:
        for n in (None, 0, 1):
            got = oracle_search(m, model, n, limit=6).word
            assert got == _shortest_by_enumeration(m, model, n, 6)


@pytest.mark.parametrize("seed", range(40))
def test_table_matches_single_searches(seed):
    rng = random.Random(seed)
    m = random_dvpda(rng, *random_shape(rng, max_states=3))
    table = oracle_table(m, SyncModel, [None, 0, 1, 2], limit=7)
    for (model, n), res in table.items():
        single = oracle_search(m, model, n, limit=7)
        assert (res.outcome, res.word) == (single.outcome, single.word)
