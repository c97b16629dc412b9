from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from choiceid.linalg import RationalSubspace, det, in_span, int_det, matvec, nullspace, rank, rref, solve

from oracles import exact_rank, leibniz_det

small_ints = st.integers(-4, 4)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda n: st.integers(1, max_cols).flatmap(
            lambda m: st.lists(st.lists(small_ints, min_size=m, max_size=m), min_size=n, max_size=n)
        )
    )


def square_matrices(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)
    )


@given(matrices())
def test_rank_matches_numpy_and_reference(m):
    assert rank(m) == np.linalg.matrix_rank(np.array(m, dtype=float)) == exact_rank(m)


@given(matrices())
def test_rref_is_reduced(m):
    red, pivots = rref(m)
    assert len(red) == len(pivots) == rank(m)
    for i, c in enumerate(pivots):
        assert red[i][c] == 1
        assert all(red[j][c] == 0 for j in range(len(red)) if j != i)
    assert pivots == sorted(pivots)


@given(matrices())
def test_nullspace_dimension_law(m):
    ncols = len(m[0])
    basis = nullspace(m, ncols)
    assert len(basis) + rank(m) == ncols
    for v in basis:
        assert all(x == 0 for x in matvec(m, v))
    if basis:
        assert rank(basis) == len(basis)


@given(square_matrices())
def test_det_agrees_with_leibniz(m):
    assert det(m) == leibniz_det([[Fraction(x) for x in row] for row in m])
    assert int_det(m) == det(m)


def test_det_of_rationals():
    m = [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 5)]]
    assert det(m) == Fraction(1, 10) - Fraction(1, 12)


@given(matrices(), st.lists(small_ints, min_size=5, max_size=5))
def test_solve_reproduces_a_consistent_rhs(m, x):
    ncols = len(m[0])
    x = [Fraction(v) for v in x[:ncols]]
    rhs = matvec(m, x)
    particular, kernel = solve(m, rhs, ncols)
    assert matvec(m, particular) == rhs
    assert len(kernel) == ncols - rank(m)


def test_solve_reports_inconsistency():
    assert solve([[1, 1], [1, 1]], [1, 2], 2) is None


def test_in_span():
    assert in_span([[1, 0, 1], [0, 1, 1]], [2, 3, 5])
    assert not in_span([[1, 0, 1]], [0, 1, 0])
    assert in_span([], [0, 0])
    assert not in_span([], [1, 0])


def test_subspace_canonical_form_is_unique():
    a = RationalSubspace(3, [[1, 1, 0], [0, 1, 1]])
    b = RationalSubspace(3, [[1, 2, 1], [1, 0, -1]])
    assert a == b and hash(a) == hash(b)
    assert a.dim == 2


@given(matrices(max_cols=4), matrices(max_cols=4))
def test_intersection_is_the_common_kernel(a, b):
    ncols = len(a[0])
    b = [row[:ncols] + [0] * (ncols - len(row)) for row in b]
    A, B = RationalSubspace.kernel_of(a, ncols), RationalSubspace.kernel_of(b, ncols)
    both = A.intersection(B)
    assert both == RationalSubspace.kernel_of(a + b, ncols)
    for v in both.basis:
        assert A.contains(v) and B.contains(v)


def test_intersection_of_transverse_lines_is_trivial():
    a = RationalSubspace(2, [[1, 0]])
    b = RationalSubspace(2, [[0, 1]])
    assert a.intersection(b).is_trivial()


def test_ambient_mismatch_rejected():
    with pytest.raises(ValueError):
        RationalSubspace(2, [[1, 0]]).intersection(RationalSubspace(3, [[1, 0, 0]]))
