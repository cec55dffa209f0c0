import pytest
from hypothesis import given, settings, strategies as st

from bsrinf.abelian import (
    AbHom,
    cokernel_order,
    common_kernel,
    count_automorphism_candidates,
    cyclic_group,
    element_order,
    enumerate_automorphisms,
    from_relation_matrix,
    image,
    is_automorphism,
    kernel,
    subgroup_generated,
)
from bsrinf.errors import BoundExceeded, InfiniteQuotient, ParentMismatch
from bsrinf.intlinalg import IntMatrix, diagonal


def group(*factors):
    return from_relation_matrix(diagonal(factors))


def test_relation_matrix_drops_unit_factors():
    A = from_relation_matrix(IntMatrix.from_rows([[4, 6], [2, 8]]))
    assert A.invariant_factors == (2, 10)
    assert A.order == 20
    B = group(1, 3, 1)
    assert B.invariant_factors == (3,) and B.is_cyclic


def test_singular_relations_rejected():
    with pytest.raises(InfiniteQuotient):
        from_relation_matrix(IntMatrix.from_rows([[1, 2], [2, 4]]))


def test_element_arithmetic_reduces():
    A = group(2, 4)
    x = A.element([3, 7])
    assert x.coords == (1, 3)
    assert (x + x).coords == (0, 2)
    assert (-x).coords == (1, 1)
    assert (4 * x) == A.zero()
    assert element_order(x) == 4
    assert len(list(A.elements())) == 8


def test_parent_mismatch():
    with pytest.raises(ParentMismatch):
        group(2).generators()[0] + group(3).generators()[0]


def test_from_ambient_matches_projection():
    A = from_relation_matrix(IntMatrix.from_rows([[4, 6], [2, 8]]))
    for z in ([1, 0], [0, 1], [4, 2], [6, 8]):
        x = A.from_ambient(z)
        back = A.lift.matvec(x.coords)
        assert A.from_ambient(back) == x
    assert not A.from_ambient([4, 2])  # a relation column


def test_hom_algebra():
    A = group(3, 9)
    h = AbHom.from_images(A, [A.element([0, 3]), A.element([1, 1])])
    x = A.element([2, 5])
    assert h(x) == 2 * h(A.generators()[0]) + 5 * h(A.generators()[1])
    assert (h + h)(x) == 2 * h(x)
    assert (h @ h)(x) == h(h(x))
    assert h.power(3)(x) == h(h(h(x)))


def test_hom_inverse():
    A = group(2, 8)
    for h in list(enumerate_automorphisms(A))[:20]:
        assert h @ h.inverse() == AbHom.identity(A)


@pytest.mark.parametrize("factors,count", [((5,), 4), ((2, 2), 6), ((2, 4), 8), ((4, 4), 96), ((2, 2, 2), 168)])
def test_automorphism_counts(factors, count):
    A = group(*factors)
    auts = list(enumerate_automorphisms(A))
    assert len(auts) == count
    assert len(set(auts)) == count
    assert all(is_automorphism(h) for h in auts)


def test_enumeration_cap():
    A = group(8, 8, 8)
    with pytest.raises(BoundExceeded) as info:
        list(enumerate_automorphisms(A, cap=1000))
    assert info.value.count == count_automorphism_candidates(A)


def test_kernel_and_cokernel():
    A = group(12)
    h = AbHom.multiplication(A, 4)
    assert kernel(h).order == 4
    assert image(h).order == 3
    assert cokernel_order(h) == 4


def test_common_kernel():
    A = group(2, 4)
    h1 = AbHom.from_images(A, [A.zero(), A.element([0, 2])])
    h2 = AbHom.from_images(A, [A.element([0, 2]), A.zero()])
    K = common_kernel(A, [h1, h2])
    assert K.elements() == {x for x in A.elements() if not h1(x) and not h2(x)}


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(2, 12), min_size=1, max_size=3),
       st.lists(st.lists(st.integers(0, 50), min_size=3, max_size=3), min_size=0, max_size=3))
def test_subgroup_methods_agree(raw, gens):
    A = from_relation_matrix(diagonal(raw))
    elems = [A.element(g[: A.rank]) for g in gens]
    a = subgroup_generated(A, elems, method="closure")
    b = subgroup_generated(A, elems, method="lattice")
    assert a.order == b.order
    assert all(x in b for x in a.elements())
