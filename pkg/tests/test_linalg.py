from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from nodalmirror.linalg import (Cokernel, Mat, SpanSolver, cokernel_with_projection,
                                kernel_basis, rank, rref)


def test_rref_identity():
    red, piv, r = rref(Mat.from_rows([[1, 0], [0, 1]]))
    assert r == 2 and piv == [0, 1]
    assert red == Mat.from_rows([[1, 0], [0, 1]])


def test_rref_proportional_rows():
    red, piv, r = rref(Mat.from_rows([[1, 2], [2, 4]]))
    assert r == 1 and piv == [0]
    assert red.to_dense()[0] == [1, 2]


def test_rref_empty():
    red, piv, r = rref(Mat(0, 3))
    assert r == 0 and piv == []
    assert rank(Mat(4, 0)) == 0


def test_rref_rational_entries():
    m = Mat.from_rows([[F(1, 2), F(1, 3)], [F(1, 4), F(1, 6)], [0, 1]])
    red, piv, r = rref(m)
    assert r == 2
    assert red.to_dense()[:2] == [[1, 0], [0, 1]]


def test_kernel_identity_and_zero():
    assert kernel_basis(Mat.from_rows([[1, 0], [0, 1]])) == []
    ker = kernel_basis(Mat(3, 3))
    assert ker == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_cokernel_surjective():
    basis, project = cokernel_with_projection(Mat.from_rows([[1, 0], [0, 1]]))
    assert basis == []
    assert project([5, 7]) == []


def test_cokernel_column():
    basis, project = cokernel_with_projection(Mat.from_rows([[1], [0]]))
    assert basis == [[0, 1]]
    assert project([3, 4]) == [4]
    assert project([9, 0]) == [0]


def test_span_solver():
    s = SpanSolver([[1, 1, 0], [0, 1, 1], [1, 2, 1]], 3)
    assert s.rank == 2
    c = s.solve([2, 3, 1])
    assert c is not None
    gens = [[1, 1, 0], [0, 1, 1], [1, 2, 1]]
    assert [sum(ci * g[j] for ci, g in zip(c, gens)) for j in range(3)] == [2, 3, 1]
    assert s.solve([0, 0, 1]) is None


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_dim=6):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    # sparse-ish: many zeros
    cell = st.one_of(st.just(F(0)), st.just(F(0)), rationals)
    rows = [[draw(cell) for _ in range(c)] for _ in range(r)]
    return Mat.from_rows(rows, cols=c)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity_and_cokernel_dims(m):
    red, piv, r = rref(m)
    ker = kernel_basis(m)
    ck = Cokernel(m)
    assert r + len(ker) == m.cols
    assert r + len(ck) == m.rows
    for v in ker:
        assert all(x == 0 for x in m.apply(v))
    assert span_rank_ok(ker, m.cols)


def span_rank_ok(vectors, dim):
    if not vectors:
        return True
    return rank(Mat.from_rows(vectors, cols=dim)) == len(vectors)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_idempotent_and_row_space(m):
    red, piv, r = rref(m)
    red2, piv2, r2 = rref(red)
    assert red2 == red and piv2 == piv
    # row space preserved: stacking does not raise the rank
    stacked = Mat.from_rows(m.to_dense() + red.to_dense(), cols=m.cols) if m.cols else Mat(0, 0)
    assert rank(stacked) == r


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_cokernel_projection_kills_image(m, data):
    ck = Cokernel(m)
    v = [data.draw(rationals) for _ in range(m.cols)]
    assert all(x == 0 for x in ck.project(m.apply(v)))
    # identity on the chosen complement
    for k, b in enumerate(ck.basis):
        coords = ck.project(b)
        assert coords == [F(int(i == k)) for i in range(len(ck))]


def test_shape_errors():
    with pytest.raises(IndexError):
        Mat(2, 2, {(2, 0): 1})
    with pytest.raises(ValueError):
        Mat(2, 2).apply([1])
