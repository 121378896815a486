from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix
from sympy.matrices.normalforms import invariant_factors

from smoothmw.abelian import (
    FgAbelianGroup,
    IntegerMatrix,
    cokernel,
    column_hermite_form,
    complete_to_basis,
    determinant,
    groups_isomorphic,
    kernel_saturated,
    rank,
    smith_normal_form,
    solve_integer,
    subquotient,
)


def matrices(max_rows=5, max_cols=5, bound=20):
    return st.integers(0, max_rows).flatmap(
        lambda m: st.integers(0, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            ).map(lambda rows, n=n: IntegerMatrix(rows, n))
        )
    )


def sympy_group(M: IntegerMatrix) -> FgAbelianGroup:
    """Independent oracle: sympy's invariant factors of the column span."""
    m, n = M.shape
    if m == 0:
        return FgAbelianGroup()
    if n == 0:
        return FgAbelianGroup(m)
    facts = [int(abs(x)) for x in invariant_factors(Matrix(M.tolist()))]
    nonzero = [f for f in facts if f]
    return FgAbelianGroup(m - len(nonzero), tuple(f for f in nonzero if f > 1))


def test_snf_identity():
    S = smith_normal_form(IntegerMatrix.identity(2))
    assert S.D == S.U == S.V == IntegerMatrix.identity(2)


def test_snf_diag_2_3():
    assert smith_normal_form(IntegerMatrix([[2, 0], [0, 3]])).diagonal == (1, 6)


def test_snf_square_of_transvection_minus_identity():
    assert smith_normal_form(IntegerMatrix([[0, -2], [0, 0]])).diagonal == (2, 0)


def test_cokernel_examples():
    assert cokernel(IntegerMatrix.identity(2)) == FgAbelianGroup()
    assert cokernel(IntegerMatrix([[0, -2], [0, 0]])) == FgAbelianGroup(1, (2,))
    assert cokernel(IntegerMatrix([[3], [0]])) == FgAbelianGroup(1, (3,))


def test_cokernel_3_0_by_enumeration():
    # Z^2 / Z(3,0): classes of the finite part are the residues of the first coordinate
    residues = {(x % 3) for x, _ in product(range(-6, 7), repeat=2)}
    assert len(residues) == 3
    assert cokernel(IntegerMatrix([[3], [0]])).torsion == (3,)


def test_kernel_examples():
    K = kernel_saturated(IntegerMatrix.zeros(1, 3).submatrix([], range(3)))
    assert K == IntegerMatrix.identity(3)
    for row in ([[1, 1]], [[2, 2]]):
        K = kernel_saturated(IntegerMatrix(row))
        assert K.ncols == 1
        assert tuple(K.col(0)) in {(1, -1), (-1, 1)}


def test_groups_isomorphic_examples():
    assert groups_isomorphic(FgAbelianGroup(1), FgAbelianGroup(1))
    assert groups_isomorphic(FgAbelianGroup(0, (2, 6)), FgAbelianGroup(0, (2, 6)))
    assert not groups_isomorphic(FgAbelianGroup(0, (12,)), FgAbelianGroup(0, (2, 6)))


def test_group_validation():
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (2, 3))
    with pytest.raises(ValueError):
        FgAbelianGroup(0, (1,))
    assert FgAbelianGroup.from_dict({"rank": 1, "torsion": [2]}).to_dict() == {"rank": 1, "torsion": [2]}


@given(matrices())
def test_snf_invariants(M):
    S = smith_normal_form(M)
    assert S.U @ M @ S.V == S.D
    if M.nrows:
        assert abs(determinant(S.U)) == 1
    if M.ncols:
        assert abs(determinant(S.V)) == 1
    m, n = M.shape
    assert all(S.D[i, j] == 0 for i in range(m) for j in range(n) if i != j)
    diag = S.diagonal
    assert all(d >= 0 for d in diag)
    nonzero = [d for d in diag if d]
    assert list(diag[: len(nonzero)]) == nonzero
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    # idempotence and determinism
    assert smith_normal_form(S.D).D == S.D
    assert smith_normal_form(M) == S


@given(matrices())
def test_cokernel_matches_sympy(M):
    assert cokernel(M) == sympy_group(M)


@given(matrices(4, 4, 9).filter(lambda M: M.nrows == M.ncols and M.nrows > 0))
def test_finite_cokernel_order_is_abs_det(M):
    G = cokernel(M)
    d = determinant(M)
    assert G.is_finite == (d != 0)
    if d:
        assert G.order == abs(d)


@given(matrices())
def test_kernel_saturated_is_primitive_kernel(M):
    K = kernel_saturated(M)
    assert K.ncols == M.ncols - rank(M)
    assert (M @ K).is_zero()
    if K.ncols:
        assert smith_normal_form(K).diagonal == (1,) * K.ncols


@given(matrices(4, 4, 9), st.lists(st.integers(-9, 9), min_size=4, max_size=4))
def test_solve_integer(M, x):
    x = tuple(x[: M.ncols])
    b = M.apply(x)
    y = solve_integer(M, b)
    assert y is not None and M.apply(y) == b


def test_solve_integer_no_solution():
    assert solve_integer(IntegerMatrix([[2]]), (1,)) is None


def test_subquotient_is_image_mod_target():
    # (span(1,0) + span(2,0)) / span(2,0) = Z/2
    assert subquotient(IntegerMatrix([[1], [0]]), IntegerMatrix([[2], [0]])) == FgAbelianGroup(0, (2,))


@given(st.lists(st.integers(-30, 30), min_size=1, max_size=5).filter(lambda v: any(v)))
def test_complete_to_basis(v):
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    v = [x // g for x in v]
    W = complete_to_basis(v)
    assert tuple(W.col(0)) == tuple(v)
    assert abs(determinant(W)) == 1


@given(matrices(5, 4, 9))
def test_column_hermite_form_same_span(M):
    H = column_hermite_form(M)
    assert H.ncols == rank(M)
    for c in M.columns():
        assert solve_integer(H, c) is not None
    for c in H.columns():
        assert solve_integer(M, c) is not None


def test_determinant_exact_on_big_entries():
    big = 10 ** 40
    M = IntegerMatrix([[big, 1], [1, big]])
    assert determinant(M) == big * big - 1
    assert Fraction(determinant(M)) == Fraction(big) ** 2 - 1
