from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from choiceid.errors import DimensionError, ValidationError
from choiceid.linalg import RationalSubspace, matvec, rank
from choiceid.model import ConcreteMatrix, assemble_matrix
from choiceid.nullspace import (
    SplitVector,
    nullspace,
    nullspace_intersection,
    pairs_separated_and_all_chosen,
    shared_null_vector,
    shared_nullspace,
    some_state_separates,
    typical_split_test,
    verdict_nullspace,
)
from choiceid.typestate import verdict_typestate_generic
from choiceid.verdict import Klass

from conftest import (
    all_two_state_models,
    grid_weights,
    load_fixture,
    simplex_points,
    two_state_classes,
    typestate_from_choice,
    typestates,
)

F = Fraction
HALF = (F(1, 2), F(1, 2))


def test_pooled_pair_shares_a_column_null_vector():
    ts = load_fixture("three_by_three_pooled").subject
    assert shared_nullspace(ts) == RationalSubspace(3, [[1, -1, 0]])


def test_unchosen_alternative_shares_a_row_null_vector():
    ts = load_fixture("three_by_three_zero_row").subject
    assert shared_nullspace(ts, transposed=True) == RationalSubspace(3, [[0, 0, 1]])


def test_transverse_subspaces_meet_trivially():
    a = nullspace([[0, 1, 0], [0, 0, 1]])
    b = nullspace([[1, 0, 0], [0, 0, 1]])
    assert nullspace_intersection(a, b).is_trivial()
    with pytest.raises(DimensionError):
        nullspace_intersection(a, RationalSubspace(2, [[1, 0]]))


def test_complementary_states_have_trivial_intersections():
    ts = load_fixture("complementary").subject
    assert shared_nullspace(ts).is_trivial()
    assert shared_nullspace(ts, transposed=True).is_trivial()


def test_typical_split_examples():
    ts = load_fixture("typical_split").subject
    M = assemble_matrix(ts, HALF)
    split = SplitVector(ts.alternatives.index("x"), ts.alternatives.index("y"), ts.n)
    assert typical_split_test(M, split, [2, 3])
    assert typical_split_test(M, split, [0, 1])
    assert not typical_split_test(M, split, [0, 2])


def test_every_split_is_typical_of_all_types_of_an_invertible_matrix():
    M = assemble_matrix(load_fixture("salience").subject, HALF)
    assert rank(M.values) == 4
    for x, y in itertools.permutations(range(4), 2):
        assert typical_split_test(M, SplitVector(x, y, 4), range(4))


def test_typical_split_argument_checks():
    M = ConcreteMatrix.from_values([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        typical_split_test(M, SplitVector(0, 1, 2), [])
    with pytest.raises(DimensionError):
        typical_split_test(M, SplitVector(0, 1, 3), [0])
    with pytest.raises(ValueError):
        SplitVector(1, 1, 2)


@pytest.mark.parametrize(
    "name, klass",
    [("complementary", Klass.GENERIC), ("three_by_three_pooled", Klass.STRUCTURAL), ("typical_split", Klass.STRUCTURAL)],
)
def test_verdicts_on_the_worked_examples(name, klass):
    assert verdict_nullspace(load_fixture(name).subject).klass is klass


def test_typical_split_failure_is_reported_as_typical():
    v = verdict_nullspace(load_fixture("typical_split").subject)
    kinds = {kind for _, _, (_, _, kind) in v.witnesses["failures"]}
    assert "typical" in kinds


def test_needs_exactly_two_states():
    with pytest.raises(ValidationError):
        verdict_nullspace(load_fixture("attention_depth").subject)


def test_verdict_is_deterministic_per_seed():
    ts = load_fixture("complementary").subject
    assert verdict_nullspace(ts, seed=5) == verdict_nullspace(ts, seed=5)


def test_two_by_two_characterization():
    models = list(all_two_state_models(2, 2))
    assert len(models) == 16
    for ts in models:
        assert verdict_nullspace(ts).identifiable == some_state_separates(ts)


def test_three_by_three_direct_check_matches_exact_verdict():
    for ts in all_two_state_models(3, 3):
        assert pairs_separated_and_all_chosen(ts) == verdict_typestate_generic(ts).identifiable


def test_three_by_three_split_condition_disagreements_are_pinned():
    """The split condition alone accepts 72 models whose matrix has a zero row.

    Exhaustively, it is never stricter than the exact verdict on 3x3, and
    every model it wrongly accepts leaves some alternative unchosen.
    """
    wrong = []
    for ts in all_two_state_models(3, 3):
        exact = verdict_typestate_generic(ts).identifiable
        split = verdict_nullspace(ts).identifiable
        if exact != split:
            assert split and not exact
            wrong.append(ts)
    assert len(wrong) == 72
    for ts in wrong:
        assert shared_nullspace(ts, transposed=True).dim > 0
        assert {k for row in ts.choice for k in row} != {0, 1, 2}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_split_verdict_agrees_with_exact_verdict_on_square_models(n):
    """Stated agreement on every square two-state model up to relabeling.

    This fails for n >= 3: the split condition accepts singular models.
    """
    wrong = [
        ts.choice
        for ts in two_state_classes(n, n)
        if verdict_nullspace(ts).identifiable != verdict_typestate_generic(ts).identifiable
    ]
    assert wrong == []


def test_four_by_four_counterexample_with_every_alternative_chosen():
    # t2's column is f(a) * t1 + f(b) * t3 for every f, yet each pooled pair passes the split test
    ts = typestate_from_choice([[0, 0], [0, 1], [1, 1], [3, 2]], 4)
    assert {k for row in ts.choice for k in row} == {0, 1, 2, 3}
    assert verdict_nullspace(ts).klass is Klass.GENERIC
    assert verdict_typestate_generic(ts).klass is Klass.STRUCTURAL
    rng = np.random.default_rng(0)
    for _ in range(20):
        w = grid_weights(rng, 2)
        M = assemble_matrix(ts, w)
        assert all(v == 0 for v in matvec(M.values, [w[0], -1, w[1], 0]))


@given(typestates(max_states=2), simplex_points(2))
def test_nullspace_dimension_law(ts, w):
    if ts.n_states != 2:
        return
    M = assemble_matrix(ts, w)
    assert nullspace(M).dim + rank(M.values) == ts.r


@given(typestates(), st.data())
def test_shared_null_vector_kills_every_mixture(ts, data):
    v = shared_null_vector(ts)
    if v is None:
        return
    assert any(v)
    for _ in range(3):
        w = data.draw(simplex_points(ts.n_states))
        assert all(x == 0 for x in matvec(assemble_matrix(ts, w).values, v))


@given(typestates(max_n=3, max_r=3, max_states=2))
def test_shared_null_vector_rules_out_identification(ts):
    if ts.n_states == 2 and ts.n == ts.r and shared_null_vector(ts) is not None:
        assert not verdict_nullspace(ts).identifiable
        assert not verdict_typestate_generic(ts).identifiable
