from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from torichodge.exactlin import (
    Matrix,
    compound_restriction,
    det,
    hermite_normal_form,
    inverse,
    normal_forms,
    rank,
    rank_kernel,
    smith_invariants,
    solve,
    wedge_matrix,
)


def int_matrices(max_rows=5, max_cols=5, lo=-6, hi=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def test_identity_rank_kernel():
    r, K = rank_kernel(Matrix.identity(3))
    assert r == 3
    assert K.cols == 0


def test_one_relation_kernel():
    r, K = rank_kernel(Matrix([[1, 1]]))
    assert r == 1
    (v,) = [K.column(j) for j in range(K.cols)]
    assert v[0] == -v[1] != 0


def _max_nonzero_minor(rows):
    m, n = len(rows), len(rows[0])
    for k in range(min(m, n), 0, -1):
        for I in combinations(range(m), k):
            for J in combinations(range(n), k):
                if det(Matrix([[rows[i][j] for j in J] for i in I])) != 0:
                    return k
    return 0


@settings(max_examples=40, deadline=None)
@given(int_matrices(5, 4))
def test_rank_is_largest_nonzero_minor(rows):
    assert rank(Matrix(rows)) == _max_nonzero_minor(rows)


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_rank_and_kernel_match_sympy(rows):
    M = Matrix(rows)
    r, K = rank_kernel(M)
    assert r == sympy.Matrix(rows).rank()
    assert K.cols == M.cols - r
    assert (M @ K).is_zero() if K.cols else True


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_smith_invariants_match_sympy(rows):
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    diag = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
    assert smith_invariants(Matrix(rows)) == diag


@pytest.mark.parametrize(
    "rows, expected",
    [([[1, 0], [0, 1]], [1, 1]), ([[1, 0], [-1, 2]], [1, 2]), ([[2, 0], [0, 3]], [1, 6])],
)
def test_smith_examples(rows, expected):
    H, inv = normal_forms(Matrix(rows))
    assert inv == expected
    if rows == [[1, 0], [0, 1]]:
        assert H == Matrix.identity(2)


@settings(max_examples=40, deadline=None)
@given(int_matrices(4, 4))
def test_hermite_form_spans_same_lattice(rows):
    M = Matrix(rows)
    H = hermite_normal_form(M)
    assert H.is_integral()
    assert rank(H) == rank(M)
    # same invariant factors means same column lattice up to unimodular change
    assert smith_invariants(H) == smith_invariants(M)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_inverse_solve(rows):
    M = Matrix(rows)
    d = det(M)
    assert d == Fraction(sympy.Matrix(rows).det())
    if d != 0:
        assert M @ inverse(M) == Matrix.identity(3)
        x = solve(M, [1, 2, 3])
        assert M.apply(list(x)) == (1, 2, 3)


def test_wedge_small_cases():
    M = Matrix([[1, 2], [3, 4]])
    assert wedge_matrix(M, 1) == M
    assert wedge_matrix(M, 2) == Matrix([[-2]])
    with pytest.raises(ValueError):
        wedge_matrix(M, 3)
    with pytest.raises(ValueError):
        wedge_matrix(M, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.data())
def test_wedge_is_multiplicative(i, data):
    a = data.draw(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=3, max_size=3))
    b = data.draw(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=4, max_size=4))
    A, B = Matrix(a), Matrix(b)
    assert wedge_matrix(A @ B, i) == wedge_matrix(A, i) @ wedge_matrix(B, i)


def test_compound_restriction_degenerate_shapes():
    C = Matrix([[1, 0, 0]])
    assert compound_restriction(C, 0) == Matrix([[1]])
    R = compound_restriction(C, 2)
    assert (R.rows, R.cols) == (0, 3)
    assert compound_restriction(Matrix.zeros(0, 2), 1).shape == (0, 2)
