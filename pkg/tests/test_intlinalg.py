import pytest
from hypothesis import given, settings, strategies as st

from bsrinf.errors import DimensionMismatch, NonCoprimeInput
from bsrinf.intlinalg import (
    IntMatrix,
    bidiagonal_matrix,
    bidiagonal_snf_closed_form,
    determinant,
    is_unimodular,
    snf,
    solve_in_lattice,
)


def matrices(max_size=5, bound=40):
    return st.integers(1, max_size).flatmap(
        lambda r: st.integers(1, max_size).flatmap(
            lambda c: st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c).map(
                lambda e: IntMatrix(r, c, tuple(e))
            )
        )
    )


def test_small_known_snf():
    res = snf(IntMatrix.from_rows([[4, 6], [2, 8]]))
    assert list(res.divisors) == [2, 10]
    assert determinant(IntMatrix.from_rows([[4, 6], [2, 8]])) == 20


def test_zero_matrix_and_rank():
    res = snf(IntMatrix.zeros(2, 3))
    assert res.rank == 0
    assert list(res.divisors) == [0, 0]


def test_shape_checks():
    with pytest.raises(DimensionMismatch):
        IntMatrix(2, 2, (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        IntMatrix.identity(2) @ IntMatrix.identity(3)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_properties(a):
    res = snf(a)
    assert res.U @ a @ res.V == res.D
    assert is_unimodular(res.U) and is_unimodular(res.V)
    ds = list(res.divisors)
    nonzero = [x for x in ds if x]
    assert ds == nonzero + [0] * (len(ds) - len(nonzero))
    assert all(y % x == 0 for x, y in zip(nonzero, nonzero[1:]))
    if a.is_square and determinant(a):
        prod = 1
        for x in ds:
            prod *= x
        assert prod == abs(determinant(a))


@settings(max_examples=100, deadline=None)
@given(matrices(4, 20), st.lists(st.integers(-10, 10), min_size=4, max_size=4))
def test_solve_in_lattice_roundtrip(a, x):
    x = x[: a.cols]
    v = a.matvec(x)
    sol = solve_in_lattice(a, v)
    assert sol is not None
    assert a.matvec(sol) == v


def test_solve_in_lattice_no_solution():
    assert solve_in_lattice(IntMatrix.from_rows([[2, 0], [0, 2]]), [1, 0]) is None


def test_bidiagonal_examples():
    # A_3(2, 3): relation matrix with 1 on the diagonal and -2 below
    assert [x for x in snf(bidiagonal_matrix(1, -2, 3)).divisors] == [1, 1, 1]
    assert bidiagonal_snf_closed_form(3, 2, 2, 2) == [1, 27]
    assert list(snf(bidiagonal_matrix(3, 2, 2, 2)).divisors) == [1, 27]


@pytest.mark.parametrize("a,b", [(2, 3), (-5, 7), (4, -9), (-11, -12)])
@pytest.mark.parametrize("n", [1, 2, 4, 6])
@pytest.mark.parametrize("k", [1, 3])
def test_bidiagonal_closed_form_matches(a, b, n, k):
    assert list(snf(bidiagonal_matrix(a, b, n, k)).divisors) == bidiagonal_snf_closed_form(a, b, n, k)


def test_bidiagonal_needs_coprime():
    with pytest.raises(NonCoprimeInput):
        bidiagonal_snf_closed_form(4, 6, 3)


def test_big_integers_exact():
    a = bidiagonal_matrix(30, 7, 20)
    assert determinant(a) == 30 ** 20
    assert snf(a).divisors[-1] == 30 ** 20
