from __future__ import annotations

import dataclasses

import numpy as np
import pytest
from hypothesis import given

from choiceid.certify import check
from choiceid.matching import Matching, verdict_general
from choiceid.model import MultiOccasionModel
from choiceid.nullspace import verdict_nullspace
from choiceid.tensor import verdict_multi
from choiceid.typestate import reassignment_check, separating_states, verdict_typestate_generic, verdict_typestate_global

from conftest import load_fixture, patterns, random_pattern, random_typestate, typestates


@given(patterns(max_n=5, max_r=5))
def test_pattern_verdicts_certify(p):
    result = check(verdict_general(p), p)
    assert result.ok, result.problems


@given(typestates())
def test_type_state_verdicts_certify(ts):
    for verdict in (verdict_typestate_generic(ts), verdict_typestate_global(ts)):
        result = check(verdict, ts)
        assert result.ok, result.problems
    for a in separating_states(ts):
        assert check(reassignment_check(ts, a), ts).ok


@given(typestates(max_n=3, max_r=3, max_states=2))
def test_split_verdicts_certify(ts):
    if ts.n_states == 2:
        result = check(verdict_nullspace(ts), ts)
        assert result.ok, result.problems


@pytest.mark.parametrize("seed", range(10))
def test_multi_occasion_verdicts_certify(seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(2, 4))
    if seed % 2:
        occasions = [random_pattern(rng, int(rng.integers(2, 5)), r) for _ in range(3)]
    else:
        occasions = [random_typestate(rng, int(rng.integers(2, 4)), r, 2) for _ in range(3)]
    model = MultiOccasionModel(occasions[0].types, occasions)
    result = check(verdict_multi(model), model)
    assert result.ok, result.problems


@pytest.mark.parametrize("name", ["example1", "example7", "example5", "example6", "multiocc2_three", "example6_collision"])
def test_fixture_verdicts_certify(name):
    from choiceid.analysis import analyze
    from choiceid.io import Report

    loaded = load_fixture(name)
    s = loaded.subject
    if isinstance(s, MultiOccasionModel):
        verdict = verdict_multi(s)
    elif hasattr(s, "states"):
        verdict = verdict_typestate_global(s)
    else:
        verdict = verdict_general(s)
    assert check(verdict, s).ok
    assert isinstance(analyze(loaded), Report)


def test_tampered_global_matching_is_caught():
    p = load_fixture("example1").subject
    v = verdict_general(p)
    bad = dataclasses.replace(v, witnesses={**v.witnesses, "matching": Matching((0, 1, 2))})
    assert not check(bad, p).ok


def test_tampered_deficient_set_is_caught():
    p = load_fixture("example7").subject
    v = verdict_general(p)
    bad = dataclasses.replace(v, witnesses={**v.witnesses, "deficient_types": (0, 2)})
    assert not check(bad, p).ok


def test_tampered_usage_coefficient_is_caught():
    ts = load_fixture("example5").subject
    v = verdict_typestate_generic(ts)
    bad = dataclasses.replace(v, witnesses={**v.witnesses, "coefficient": -1})
    assert not check(bad, ts).ok


def test_tampered_matchability_is_caught():
    model = load_fixture("multiocc2_three").subject
    v = verdict_multi(model)
    bad = dataclasses.replace(v, witnesses={**v.witnesses, "v": (2, 1, 1)})
    assert not check(bad, model).ok


def test_tampered_type_state_rank_bound_is_caught():
    e6 = load_fixture("example6").subject
    model = MultiOccasionModel(e6.types, [e6, e6, e6])
    from choiceid.tensor import verdict_three_occasion

    v = verdict_three_occasion(model)
    bad = dataclasses.replace(v, witnesses={**v.witnesses, "v": (4, 3, 3), "deficient": (None, (0, 1, 2, 3), (0, 1, 2, 3))})
    assert not check(bad, model).ok


def test_structural_claim_on_identifiable_model_is_caught():
    ts = load_fixture("example5").subject
    wrong = dataclasses.replace(verdict_typestate_generic(load_fixture("example6").subject), witnesses={})
    assert not check(wrong, ts).ok
