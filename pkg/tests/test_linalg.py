from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nbihom.instances import EX2_4_BETA
from nbihom.linalg import (Matrix, Singular, Subspace, commutant_basis, image, invert, is_invertible,
                           kernel, quotient_dim, solve, unit_vector)

from conftest import matrices, small


def test_solve_identity():
    assert solve(Matrix.identity(3), (1, 2, 3)) == (1, 2, 3)


def test_solve_zero_matrix():
    assert solve(Matrix.zeros(2), (0, 0)) == (0, 0)


def test_solve_inconsistent():
    assert solve(Matrix.from_rows([[1, 1], [2, 2]]), (1, 3)) is None


def test_solve_free_variables_are_zero():
    x = solve(Matrix.from_rows([[1, 1]]), (5,))
    assert x == (5, 0)


def test_kernel_cases():
    assert kernel(Matrix.identity(4)).dim == 0
    assert kernel(Matrix.zeros(3)).dim == 3
    k = kernel(Matrix.from_rows([[1, -1]]))
    assert k == Subspace.span([(1, 1)], 2)


def test_quotient_dim():
    full = Subspace.full(3)
    assert quotient_dim(full, Subspace.zero(3)) == 3
    assert quotient_dim(full, full) == 0
    W = Subspace.span([(1, 0), (0, 1)], 2)
    assert quotient_dim(W, Subspace.span([(1, 1)], 2)) == 1


def test_invert_cases():
    assert invert(Matrix.identity(3)).is_identity()
    d = Matrix.diag([-1, 1])
    assert invert(d) == d
    b = invert(EX2_4_BETA)
    assert (EX2_4_BETA @ b).is_identity()
    assert b == EX2_4_BETA.T           # signed permutation: inverse is the transpose


def test_invert_singular():
    with pytest.raises(Singular):
        invert(Matrix.from_rows([[1, 2], [2, 4]]))


def test_subspace_canonical_form():
    a = Subspace.span([(1, 2, 0), (0, 1, 1)], 3)
    b = Subspace.span([(1, 3, 1), (2, 4, 0), (1, 2, 0)], 3)
    assert a == b
    assert a.contains((1, 1, -1))
    assert not a.contains((0, 0, 1))


def test_subspace_intersection_and_sum():
    U = Subspace.span([(1, 0, 0), (0, 1, 0)], 3)
    V = Subspace.span([(0, 1, 0), (0, 0, 1)], 3)
    assert (U + V).dim == 3
    assert U.intersection(V) == Subspace.span([(0, 1, 0)], 3)


def test_commutant_of_distinct_diagonal_is_diagonal():
    basis = commutant_basis([Matrix.diag([1, 2, 3])], 3)
    assert len(basis) == 3
    assert all(b[i, j] == 0 for b in basis for i in range(3) for j in range(3) if i != j)


@given(matrices(), st.data())
def test_solve_recovers_a_preimage(A, data):
    x = [data.draw(small) for _ in range(A.cols)]
    b = A(x)
    y = solve(A, b)
    assert y is not None and A(y) == b


@given(matrices())
def test_rank_nullity(A):
    assert kernel(A).dim + image(A.T).dim == A.cols
    assert image(A).dim == A.rank()


@given(matrices(max_dim=4).filter(lambda m: m.rows == m.cols))
def test_inverse_both_sides(A):
    if is_invertible(A):
        B = invert(A)
        assert (A @ B).is_identity() and (B @ A).is_identity()
    else:
        assert A.rank() < A.rows


@given(matrices(rows=3, cols=3), matrices(rows=3, cols=3))
def test_intersection_dimension_formula(A, B):
    U, V = image(A), image(B)
    assert (U + V).dim + U.intersection(V).dim == U.dim + V.dim
    assert U.intersection(V) <= U


def test_unit_vector_and_fraction_entries():
    assert unit_vector(3, 1) == (0, 1, 0)
    assert Matrix.diag(["1/2", 2])[0, 0] == Fraction(1, 2)
