from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from hbl.subspace import (
    ClosureLimitError,
    DimensionError,
    Subspace,
    annihilator,
    as_matrix,
    closure_flag_plus_one,
    determinant,
    flag_plus_one_candidates,
    image,
    image_dim,
    intersect,
    kernel,
    lattice_closure,
    rank,
    sum_,
)

small = st.integers(-3, 3)


def vectors(d, k):
    return st.lists(st.lists(small, min_size=d, max_size=d), min_size=0, max_size=k)


def test_canonical_equality():
    assert Subspace.span([[1, 1], [0, 1]], 2) == Subspace.full(2)
    assert Subspace.span([[2, 4]], 2) == Subspace.span([["1/2", 1]], 2)
    assert Subspace.span([[0, 0]], 2) == Subspace.zero(2)


def test_rational_entries():
    assert as_matrix([["1/3", 2]]) == ((F(1, 3), F(2)),)
    with pytest.raises(ValueError):
        as_matrix([["x"]])
    with pytest.raises(TypeError):
        as_matrix([[0.5]])
    with pytest.raises(DimensionError):
        as_matrix([[1, 2], [1]])


def test_lines_in_the_plane():
    a, b = Subspace.span([[1, 0]], 2), Subspace.span([[1, 1]], 2)
    assert sum_(a, b) == Subspace.full(2)
    assert intersect(a, b) == Subspace.zero(2)
    assert a <= Subspace.full(2) and not a <= b
    assert (2, 0) in a and (1, 2) not in a


def test_mixed_ambient_dimensions_rejected():
    with pytest.raises(DimensionError):
        sum_(Subspace.full(2), Subspace.full(3))


def test_kernel_and_image():
    L = as_matrix([[1, -1, 0]])
    K = kernel(L)
    assert K.dim == 2 and (1, 1, 0) in K and (0, 0, 1) in K
    assert image_dim(L, K) == 0
    assert image(L, Subspace.full(3)) == Subspace.full(1)


def test_determinant():
    assert determinant(as_matrix([[0, 1], [1, 0]])) == -1
    assert determinant(as_matrix([[1, 2], [2, 4]])) == 0


@settings(max_examples=60, deadline=None)
@given(vectors(4, 3), vectors(4, 3))
def test_dimension_formula(u, v):
    U, V = Subspace.span(u, 4) if u else Subspace.zero(4), Subspace.span(v, 4) if v else Subspace.zero(4)
    assert sum_(U, V).dim + intersect(U, V).dim == U.dim + V.dim
    assert intersect(U, V) <= U and U <= sum_(U, V)


@settings(max_examples=40, deadline=None)
@given(vectors(3, 3))
def test_annihilator_is_orthogonal(u):
    U = Subspace.span(u, 3) if u else Subspace.zero(3)
    A = annihilator(U)
    assert len(A) == 3 - U.dim
    assert all(sum(x * y for x, y in zip(a, b)) == 0 for a in A for b in U.basis)


@settings(max_examples=40, deadline=None)
@given(vectors(3, 2), st.lists(st.lists(small, min_size=3, max_size=3), min_size=1, max_size=3))
def test_flag_plus_one_closure(v, gens):
    V = Subspace.span(v, 3) if v else Subspace.zero(3)
    flag, acc = [], []
    for g in gens:
        acc.append(g)
        W = Subspace.span(acc, 3)
        if not flag or W != flag[-1]:
            flag.append(W)
    t = len(flag)
    closure = closure_flag_plus_one(V, flag)
    assert len(closure) <= 1 + 3 * t + t * (t - 1) // 2
    assert set(closure) <= flag_plus_one_candidates(V, flag)


def test_flag_must_be_chain():
    a, b = Subspace.span([[1, 0]], 2), Subspace.span([[0, 1]], 2)
    with pytest.raises(ValueError):
        closure_flag_plus_one(Subspace.zero(2), [a, b])


def test_closure_cap():
    lines = [Subspace.span([[1, k, k * k]], 3) for k in range(6)]
    with pytest.raises(ClosureLimitError):
        lattice_closure(lines, cap=10)


def test_rank():
    assert rank(as_matrix([[1, 2, 3], [2, 4, 6]])) == 1
