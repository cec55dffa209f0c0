"""Finite abelian groups given as cokernels ``Z^c / Im(R)``.

Elements are stored in invariant-factor coordinates: a tuple of residues,
one per invariant factor.  Factors equal to 1 are dropped, so a cyclic
group always has one coordinate and the trivial group has none.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, lcm, prod
from typing import Iterator, Sequence

from .errors import BoundExceeded, InfiniteQuotient, InvalidInput, NotSquare, ParentMismatch
from .intlinalg import IntMatrix, determinant, snf, solve_in_lattice

__all__ = [
    "FinAbGroup",
    "AbElement",
    "AbHom",
    "AbSubgroup",
    "from_relation_matrix",
    "cyclic_group",
    "add",
    "neg",
    "scale",
    "element_order",
    "apply",
    "compose",
    "is_automorphism",
    "subgroup_generated",
    "contains",
    "cokernel_order",
    "kernel",
    "common_kernel",
    "image",
    "count_automorphism_candidates",
    "enumerate_automorphisms",
    "DEFAULT_CLOSURE_BOUND",
    "DEFAULT_AUTOMORPHISM_CAP",
]

# Largest parent order for which subgroup orders are found by closure
# enumeration rather than through the lattice.
DEFAULT_CLOSURE_BOUND = 2 ** 16
DEFAULT_AUTOMORPHISM_CAP = 10 ** 6


def _unimodular_inverse(u: IntMatrix) -> IntMatrix:
    n = u.rows
    aug = [[Fraction(x) for x in u.row(i)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    out = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    if any(x.denominator != 1 for row in out for x in row):
        raise InvalidInput("matrix is not unimodular")
    return IntMatrix.from_rows([[int(x) for x in row] for row in out])


@dataclass(frozen=True, eq=False)
class FinAbGroup:
    """``Z_{f_1} + ... + Z_{f_k}`` with ``f_i | f_{i+1}`` and every ``f_i > 1``.

    ``projection`` (k x c) sends an ambient vector of ``Z^c`` to
    invariant-factor coordinates; ``lift`` (c x k) sends the i-th
    generator back to a representative in ``Z^c``.
    """

    invariant_factors: tuple[int, ...]
    projection: IntMatrix
    lift: IntMatrix
    relations: IntMatrix | None = None

    def __post_init__(self):
        fs = self.invariant_factors
        if any(f < 2 for f in fs):
            raise InvalidInput(f"invariant factors must exceed 1: {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise InvalidInput(f"invariant factors must form a divisor chain: {fs}")

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        """Number of invariant-factor coordinates (0 for the trivial group)."""
        return len(self.invariant_factors)

    @property
    def ambient_dim(self) -> int:
        return self.projection.cols

    @property
    def is_cyclic(self) -> bool:
        return self.rank <= 1

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinAbGroup):
            return NotImplemented
        return (self.invariant_factors == other.invariant_factors
                and self.projection == other.projection)

    def __hash__(self):
        return hash((self.invariant_factors, self.projection))

    def __repr__(self):
        body = " + ".join(f"Z_{f}" for f in self.invariant_factors) or "trivial"
        return f"FinAbGroup({body})"

    def element(self, coords: Sequence[int]) -> AbElement:
        if len(coords) != self.rank:
            raise InvalidInput(f"expected {self.rank} coordinates, got {len(coords)}")
        return AbElement(self, tuple(x % f for x, f in zip(coords, self.invariant_factors)))

    def zero(self) -> AbElement:
        return AbElement(self, (0,) * self.rank)

    def generators(self) -> list[AbElement]:
        return [self.element([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]

    def from_ambient(self, z: Sequence[int]) -> AbElement:
        """The class of an ambient vector ``z`` in ``Z^c / Im(R)``."""
        return self.element(self.projection.matvec(z))

    def ambient_generator(self, i: int) -> AbElement:
        """Image of the i-th standard basis vector of the ambient lattice."""
        return self.element(self.projection.col(i))

    def elements(self) -> Iterator[AbElement]:
        for coords in itertools.product(*(range(f) for f in self.invariant_factors)):
            yield AbElement(self, coords)


@dataclass(frozen=True, eq=False, slots=True)
class AbElement:
    group: FinAbGroup
    coords: tuple[int, ...]

    def _check(self, other: AbElement):
        if self.group is not other.group and self.group != other.group:
            raise ParentMismatch(f"{self.group!r} vs {other.group!r}")

    def __eq__(self, other):
        if not isinstance(other, AbElement):
            return NotImplemented
        return self.coords == other.coords and (self.group is other.group or self.group == other.group)

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other: AbElement) -> AbElement:
        self._check(other)
        fs = self.group.invariant_factors
        return AbElement(self.group, tuple((a + b) % f for a, b, f in zip(self.coords, other.coords, fs)))

    def __neg__(self) -> AbElement:
        fs = self.group.invariant_factors
        return AbElement(self.group, tuple(-a % f for a, f in zip(self.coords, fs)))

    def __sub__(self, other: AbElement) -> AbElement:
        return self + (-other)

    def __rmul__(self, k: int) -> AbElement:
        fs = self.group.invariant_factors
        return AbElement(self.group, tuple(k * a % f for a, f in zip(self.coords, fs)))

    def __bool__(self) -> bool:
        return any(self.coords)

    def __repr__(self):
        return f"AbElement{self.coords}"


def from_relation_matrix(rel: IntMatrix) -> FinAbGroup:
    """``Z^c / Im(rel)`` for a square nonsingular ``rel``."""
    if not rel.is_square:
        raise NotSquare(f"relation matrix is {rel.rows}x{rel.cols}")
    if determinant(rel) == 0:
        raise InfiniteQuotient("relation matrix is singular")
    res = snf(rel)
    keep = [i for i, d in enumerate(res.divisors) if d != 1]
    u_inv = _unimodular_inverse(res.U)
    c = rel.rows
    proj = IntMatrix(len(keep), c, tuple(x for i in keep for x in res.U.row(i)))
    lift = IntMatrix.from_columns([u_inv.col(i) for i in keep], nrows=c) if keep else IntMatrix(c, 0, ())
    return FinAbGroup(tuple(res.divisors[i] for i in keep), proj, lift, rel)


def cyclic_group(n: int) -> FinAbGroup:
    """``Z_n`` with ambient lattice ``Z`` and relation ``[n]``."""
    if n < 1:
        raise InvalidInput("cyclic group order must be positive")
    return from_relation_matrix(IntMatrix(1, 1, (n,)))


def add(x: AbElement, y: AbElement) -> AbElement:
    return x + y


def neg(x: AbElement) -> AbElement:
    return -x


def scale(k: int, x: AbElement) -> AbElement:
    return k * x


def element_order(x: AbElement) -> int:
    return reduce(lcm, (f // gcd(a, f) for a, f in zip(x.coords, x.group.invariant_factors)), 1)


@dataclass(frozen=True, eq=False)
class AbHom:
    """A homomorphism given by an integer matrix in invariant-factor
    coordinates: column j is the image of the j-th source generator."""

    source: FinAbGroup
    target: FinAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.rank, self.source.rank):
            raise InvalidInput(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.target.rank}x{self.source.rank}"
            )
        # reduce entries so equal maps have equal matrices
        tf = self.target.invariant_factors
        reduced = tuple(
            self.matrix[i, j] % tf[i] for i in range(self.matrix.rows) for j in range(self.matrix.cols)
        )
        object.__setattr__(self, "matrix", IntMatrix(self.matrix.rows, self.matrix.cols, reduced))
        for j, fj in enumerate(self.source.invariant_factors):
            for i, fi in enumerate(tf):
                if (fj * self.matrix[i, j]) % fi:
                    raise InvalidInput(f"not well defined: generator {j} of order {fj} maps to order not dividing it")

    def __eq__(self, other):
        if not isinstance(other, AbHom):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    @classmethod
    def identity(cls, group: FinAbGroup) -> AbHom:
        return cls(group, group, IntMatrix.identity(group.rank))

    @classmethod
    def zero(cls, source: FinAbGroup, target: FinAbGroup | None = None) -> AbHom:
        target = source if target is None else target
        return cls(source, target, IntMatrix.zeros(target.rank, source.rank))

    @classmethod
    def multiplication(cls, group: FinAbGroup, k: int) -> AbHom:
        return cls(group, group, IntMatrix(group.rank, group.rank, tuple(
            k if i == j else 0 for i in range(group.rank) for j in range(group.rank))))

    @classmethod
    def from_images(cls, source: FinAbGroup, images: Sequence[AbElement], target: FinAbGroup | None = None) -> AbHom:
        target = source if target is None else target
        cols = [im.coords for im in images]
        if len(cols) != source.rank:
            raise InvalidInput("need one image per source generator")
        mat = IntMatrix(target.rank, source.rank, tuple(cols[j][i] for i in range(target.rank) for j in range(source.rank)))
        return cls(source, target, mat)

    @classmethod
    def from_ambient(cls, group: FinAbGroup, p: IntMatrix) -> AbHom:
        """Endomorphism induced by an ambient matrix ``p`` that preserves
        the relation lattice."""
        if group.relations is not None:
            for j in range(group.relations.cols):
                if group.from_ambient(p.matvec(group.relations.col(j))):
                    raise InvalidInput("ambient matrix does not preserve the relation lattice")
        images = [group.from_ambient(p.matvec(group.lift.col(j))) for j in range(group.rank)]
        return cls.from_images(group, images)

    def __call__(self, x: AbElement) -> AbElement:
        return apply(self, x)

    def images(self) -> list[AbElement]:
        return [AbElement(self.target, self.matrix.col(j)) for j in range(self.source.rank)]

    def __add__(self, other: AbHom) -> AbHom:
        _same(self.source, other.source)
        _same(self.target, other.target)
        return AbHom(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: AbHom) -> AbHom:
        _same(self.source, other.source)
        _same(self.target, other.target)
        return AbHom(self.source, self.target, self.matrix - other.matrix)

    def __matmul__(self, other: AbHom) -> AbHom:
        return compose(self, other)

    def __rmul__(self, k: int) -> AbHom:
        if not isinstance(k, int):
            return NotImplemented
        return AbHom(self.source, self.target, k * self.matrix)

    def power(self, k: int, inverse: AbHom | None = None) -> AbHom:
        """``self**k`` by square-and-multiply; negative ``k`` needs ``inverse``."""
        _same(self.source, self.target)
        if k < 0:
            if inverse is None:
                inverse = self.inverse()
            return inverse.power(-k)
        result = AbHom.identity(self.source)
        base = self
        while k:
            if k & 1:
                result = compose(base, result)
            k >>= 1
            if k:
                base = compose(base, base)
        return result

    def inverse(self) -> AbHom:
        """Inverse automorphism, found by solving ``self(x) = g_j`` for every
        generator ``g_j``."""
        if not is_automorphism(self):
            raise InvalidInput("not an automorphism")
        g = self.source
        k = g.rank
        if k == 0:
            return AbHom.identity(g)
        diag = [[g.invariant_factors[i] if i == j else 0 for j in range(k)] for i in range(k)]
        system = IntMatrix.from_rows([list(self.matrix.row(i)) + diag[i] for i in range(k)])
        witness = snf(system)
        cols = []
        for j in range(k):
            e = [int(i == j) for i in range(k)]
            x = solve_in_lattice(system, e, witness=witness)
            cols.append(g.element(x[:k]).coords)
        return AbHom(g, g, IntMatrix.from_columns(cols))

    def __repr__(self):
        return f"AbHom({self.matrix.tolist()} on {self.source!r})"


def _same(g: FinAbGroup, h: FinAbGroup):
    if g is not h and g != h:
        raise ParentMismatch(f"{g!r} vs {h!r}")


def apply(h: AbHom, x: AbElement) -> AbElement:
    _same(h.source, x.group)
    m = h.matrix
    tf = h.target.invariant_factors
    n = m.cols
    e = m.entries
    xc = x.coords
    return AbElement(h.target, tuple(
        sum(e[i * n + j] * xc[j] for j in range(n)) % tf[i] for i in range(m.rows)
    ))


def compose(g: AbHom, h: AbHom) -> AbHom:
    """``g`` after ``h``."""
    _same(h.target, g.source)
    return AbHom(h.source, g.target, g.matrix @ h.matrix)


def is_automorphism(h: AbHom) -> bool:
    if h.source is not h.target and h.source != h.target:
        return False
    return subgroup_generated(h.target, h.images()).order == h.target.order


@dataclass(frozen=True, eq=False)
class AbSubgroup:
    parent: FinAbGroup
    generators: tuple[AbElement, ...]
    order: int

    @cached_property
    def _lattice(self) -> tuple[IntMatrix, object]:
        return _generator_lattice(self.parent, self.generators)

    def __contains__(self, x: AbElement) -> bool:
        return contains(self, x)

    def __eq__(self, other):
        if not isinstance(other, AbSubgroup):
            return NotImplemented
        return (self.parent == other.parent and self.order == other.order
                and all(g in self for g in other.generators))

    def __hash__(self):
        return hash((self.parent, self.order))

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    def is_cyclic(self) -> bool:
        return any(element_order(g) == self.order for g in self.generators) or self.order == 1

    def elements(self) -> set[AbElement]:
        return _closure(self.parent, self.generators)

    def __repr__(self):
        return f"AbSubgroup(order={self.order}, gens={list(self.generators)})"


def _generator_lattice(parent: FinAbGroup, gens: Sequence[AbElement]):
    k = parent.rank
    fs = parent.invariant_factors
    rows = [[g.coords[i] for g in gens] + [fs[i] if i == j else 0 for j in range(k)] for i in range(k)]
    mat = IntMatrix.from_rows(rows)
    return mat, snf(mat)


def _closure(parent: FinAbGroup, gens: Sequence[AbElement]) -> set[AbElement]:
    elems = {parent.zero()}
    for g in gens:
        if g in elems:
            continue
        coset_reps = [g]
        step = g
        while True:
            step = step + g
            if step in elems:
                break
            coset_reps.append(step)
        elems = elems | {e + r for e in elems for r in coset_reps}
    return elems


def subgroup_generated(parent: FinAbGroup, gens: Sequence[AbElement], *,
                       closure_bound: int = DEFAULT_CLOSURE_BOUND,
                       method: str = "auto") -> AbSubgroup:
    """Subgroup generated by ``gens``.

    ``method`` is ``"closure"`` (enumerate the subgroup), ``"lattice"``
    (index of the lifted generator lattice) or ``"auto"``, which uses
    closure when ``parent.order <= closure_bound``.
    """
    gens = tuple(gens)
    for g in gens:
        _same(parent, g.group)
    if parent.rank == 0:
        return AbSubgroup(parent, gens, 1)
    if method == "auto":
        method = "closure" if parent.order <= closure_bound else "lattice"
    if method == "closure":
        order = len(_closure(parent, gens))
    elif method == "lattice":
        _, res = _generator_lattice(parent, gens)
        order = parent.order // prod(res.divisors)
    else:
        raise InvalidInput(f"unknown method {method!r}")
    return AbSubgroup(parent, gens, order)


def contains(sub: AbSubgroup, x: AbElement) -> bool:
    _same(sub.parent, x.group)
    if sub.parent.rank == 0:
        return True
    mat, res = sub._lattice
    return solve_in_lattice(mat, x.coords, witness=res) is not None


def image(h: AbHom, **kw) -> AbSubgroup:
    return subgroup_generated(h.target, h.images(), **kw)


def common_kernel(source: FinAbGroup, homs: Sequence[AbHom]) -> AbSubgroup:
    """Intersection of the kernels of ``homs`` (all defined on ``source``).

    Solves ``H x = F y`` over the integers, where ``H`` stacks the hom
    matrices and ``F`` is the diagonal of target invariant factors; the
    x-part of an integer nullspace basis generates the kernel.
    """
    for h in homs:
        _same(h.source, source)
    k = source.rank
    if k == 0:
        return AbSubgroup(source, (), 1)
    rows = []
    for h in homs:
        rows.extend(list(h.matrix.row(i)) for i in range(h.matrix.rows))
    factors = [f for h in homs for f in h.target.invariant_factors]
    r = len(rows)
    if r == 0:
        return subgroup_generated(source, source.generators())
    big = IntMatrix.from_rows([rows[i] + [factors[i] if i == j else 0 for j in range(r)] for i in range(r)])
    res = snf(big)
    gens = [source.element(res.V.col(j)[:k]) for j in range(res.rank, k + r)]
    return subgroup_generated(source, [g for g in gens if g], method="lattice")


def kernel(h: AbHom) -> AbSubgroup:
    return common_kernel(h.source, [h])


def cokernel_order(h: AbHom) -> int:
    """``|target / Im(h)|``."""
    return h.target.order // image(h).order


def count_automorphism_candidates(g: FinAbGroup) -> int:
    fs = g.invariant_factors
    return prod(gcd(a, b) for a in fs for b in fs)


def enumerate_automorphisms(g: FinAbGroup, cap: int = DEFAULT_AUTOMORPHISM_CAP) -> Iterator[AbHom]:
    """Every automorphism of ``g`` exactly once, in lexicographic order of
    the row-major matrix entries.

    Entry ``(i, j)`` ranges over the ``gcd(f_i, f_j)`` residues mod ``f_i``
    that keep generator ``j`` of order dividing ``f_j``.
    """
    count = count_automorphism_candidates(g)
    if count > cap:
        raise BoundExceeded(f"{count} candidate matrices exceed cap {cap}", count=count, cap=cap)
    fs = g.invariant_factors
    k = g.rank
    choices = []
    for i in range(k):
        for j in range(k):
            step = fs[i] // gcd(fs[i], fs[j])
            choices.append(range(0, fs[i], step))
    for entries in itertools.product(*choices):
        h = AbHom(g, g, IntMatrix(k, k, tuple(entries)))
        if is_automorphism(h):
            yield h
