"""The groups ``G_c(m, n) = A_c(m, n) x| <t>``.

``A_c(m, n)`` is the cokernel of the lower bidiagonal matrix with ``n - m``
on the diagonal and ``-m`` below it; ``t`` acts by ``t^-1 a t = psi(a)``
where ``psi`` is induced by the unipotent matrix with ones on the diagonal
and subdiagonal.  For coprime ``m, n`` this group is the class-``c``
nilpotent quotient of ``BS(m, n)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .abelian import (
    AbElement,
    AbHom,
    AbSubgroup,
    FinAbGroup,
    element_order,
    from_relation_matrix,
    image,
    subgroup_generated,
)
from .errors import DegenerateParams, InvalidInput, ParentMismatch, PreconditionViolated
from .intlinalg import IntMatrix

__all__ = [
    "BSParams",
    "GcGroup",
    "GcElement",
    "phi_matrix",
    "psi_matrix",
    "build_gc",
    "multiply",
    "inverse",
    "lower_central_series",
    "verify_structure",
    "ReductionReport",
    "d_subgroup_reduction",
]


@dataclass(frozen=True)
class BSParams:
    """Canonical parameters ``0 < m <= |n|`` for ``BS(m, n)``."""

    m: int
    n: int
    canonicalized: bool = False
    original: tuple[int, int] | None = None

    def __post_init__(self):
        if not (0 < self.m <= abs(self.n)):
            raise InvalidInput(f"non-canonical parameters ({self.m}, {self.n}); use BSParams.of")

    @classmethod
    def of(cls, m: int, n: int) -> BSParams:
        """Normalise ``(m, n)``: swap when ``|m| > |n|`` and flip both signs
        when ``m < 0``.  Both moves give isomorphic groups."""
        if m == 0 or n == 0:
            raise InvalidInput("Baumslag-Solitar parameters must be nonzero")
        cm, cn = m, n
        if abs(cm) > abs(cn):
            cm, cn = cn, cm
        if cm < 0:
            cm, cn = -cm, -cn
        changed = (cm, cn) != (m, n)
        return cls(cm, cn, changed, (m, n))

    @property
    def d(self) -> int:
        return gcd(self.m, self.n)

    @property
    def coprime(self) -> bool:
        return self.d == 1

    def reduced(self) -> BSParams:
        d = self.d
        return BSParams(self.m // d, self.n // d)

    def as_dict(self) -> dict:
        out = {"m": self.m, "n": self.n, "d": self.d, "canonicalized": self.canonicalized}
        if self.canonicalized:
            out["input"] = list(self.original)
        return out


def phi_matrix(m: int, n: int, c: int) -> IntMatrix:
    if c < 1:
        raise InvalidInput("class bound c must be >= 1")
    return IntMatrix.from_rows([
        [n - m if i == j else (-m if i == j + 1 else 0) for j in range(c)] for i in range(c)
    ])


def psi_matrix(c: int) -> IntMatrix:
    if c < 1:
        raise InvalidInput("class bound c must be >= 1")
    return IntMatrix.from_rows([
        [1 if i == j or i == j + 1 else 0 for j in range(c)] for i in range(c)
    ])


@dataclass(frozen=True, eq=False)
class GcElement:
    """Normal form ``a * t**k``."""

    a: AbElement
    k: int

    def __eq__(self, other):
        if not isinstance(other, GcElement):
            return NotImplemented
        return self.k == other.k and self.a == other.a

    def __hash__(self):
        return hash((self.a.coords, self.k))

    def __repr__(self):
        return f"GcElement({self.a.coords}, t^{self.k})"


@dataclass(frozen=True, eq=False)
class GcGroup:
    params: BSParams
    c: int
    torsion: FinAbGroup
    psi: AbHom
    psi_inverse: AbHom
    s: AbElement
    nu: int | None
    _powers: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.params.m

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def label(self) -> str:
        return f"G_{self.c}({self.m},{self.n})"

    def __repr__(self):
        return f"GcGroup({self.label}, torsion={self.torsion!r}, nu={self.nu})"

    def psi_power(self, k: int) -> AbHom:
        """``psi**k`` for any integer ``k``, memoised."""
        h = self._powers.get(k)
        if h is None:
            if k >= 0:
                h = self.psi.power(k)
            else:
                h = self.psi_inverse.power(-k)
            if len(self._powers) < 256:
                self._powers[k] = h
        return h

    def element(self, a: AbElement | None = None, k: int = 0) -> GcElement:
        if a is None:
            a = self.torsion.zero()
        elif a.group is not self.torsion and a.group != self.torsion:
            raise ParentMismatch("element does not belong to this torsion group")
        return GcElement(a, k)

    def identity(self) -> GcElement:
        return GcElement(self.torsion.zero(), 0)

    @property
    def t(self) -> GcElement:
        return GcElement(self.torsion.zero(), 1)

    def mul(self, x: GcElement, y: GcElement) -> GcElement:
        return multiply(self, x, y)

    def inv(self, x: GcElement) -> GcElement:
        return inverse(self, x)

    def power(self, x: GcElement, e: int) -> GcElement:
        if e < 0:
            x, e = inverse(self, x), -e
        result = self.identity()
        while e:
            if e & 1:
                result = multiply(self, result, x)
            e >>= 1
            if e:
                x = multiply(self, x, x)
        return result


def build_gc(params: BSParams, c: int) -> GcGroup:
    if c < 1:
        raise InvalidInput("class bound c must be >= 1")
    m, n = params.m, params.n
    if m == n:
        raise DegenerateParams(f"m = n = {m}: A_c is infinite")
    torsion = from_relation_matrix(phi_matrix(m, n, c))
    psi = AbHom.from_ambient(torsion, psi_matrix(c))
    psi_inv = psi.inverse()
    s = torsion.ambient_generator(0)
    nu = None
    if params.d == 1:
        modulus = abs(n - m) ** c
        nu = n * pow(m, -1, modulus) % modulus if modulus > 1 else 0
    return GcGroup(params, c, torsion, psi, psi_inv, s, nu)


def _check(g: GcGroup, x: GcElement):
    if x.a.group is not g.torsion and x.a.group != g.torsion:
        raise ParentMismatch(f"element is not in {g.label}")


def multiply(g: GcGroup, x: GcElement, y: GcElement) -> GcElement:
    """``(a1 t^k1)(a2 t^k2) = (a1 + psi^-k1(a2)) t^(k1 + k2)``."""
    _check(g, x)
    _check(g, y)
    a2 = g.psi_power(-x.k)(y.a) if x.k else y.a
    return GcElement(x.a + a2, x.k + y.k)


def inverse(g: GcGroup, x: GcElement) -> GcElement:
    _check(g, x)
    a = g.psi_power(x.k)(x.a) if x.k else x.a
    return GcElement(-a, -x.k)


def lower_central_series(g: GcGroup) -> list[AbSubgroup]:
    """``[gamma_2, ..., gamma_{c+1}]`` as subgroups of the torsion.

    ``gamma_2`` is the image of ``psi - id`` and each later term is the
    image of the previous one under ``psi - id``.
    """
    delta = g.psi - AbHom.identity(g.torsion)
    terms = [image(delta)]
    for _ in range(g.c - 1):
        prev = terms[-1]
        terms.append(subgroup_generated(g.torsion, [delta(x) for x in prev.generators]))
    return terms


def verify_structure(g: GcGroup) -> dict[str, bool]:
    """Structural checks of the lower central series for coprime ``m, n``.

    * ``difference_powers_deep``: ``(m-n)^k s`` lies in ``gamma_{k+1}``, 1 <= k <= c
    * ``torsion_cyclic_on_s``: the torsion is generated by ``s``
    * ``gamma_terms_cyclic``: ``gamma_k = <(m-n)^(k-1) s>`` for 2 <= k <= c
    * ``class_bound``: ``gamma_{c+1}`` is trivial
    * ``defining_relation``: ``psi(m s) = n s``
    """
    if g.params.d != 1:
        raise PreconditionViolated("structure checks need gcd(m, n) = 1")
    m, n, c = g.m, g.n, g.c
    gammas = lower_central_series(g)  # gammas[i] is gamma_{i+2}
    diff = m - n
    report = {}
    report["difference_powers_deep"] = all((diff ** k) * g.s in gammas[k - 1] for k in range(1, c + 1))
    report["torsion_cyclic_on_s"] = element_order(g.s) == g.torsion.order
    ok = True
    for k in range(2, c + 1):
        expected = subgroup_generated(g.torsion, [(diff ** (k - 1)) * g.s])
        ok = ok and gammas[k - 2] == expected
    report["gamma_terms_cyclic"] = ok
    report["class_bound"] = gammas[c - 1].is_trivial
    report["defining_relation"] = g.psi(m * g.s) == n * g.s
    return report


@dataclass
class ReductionReport:
    group: GcGroup
    reduced: GcGroup
    subgroup: AbSubgroup
    embedding: AbHom  # reduced torsion -> d * torsion
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def generator_correspondence(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        return [(x.coords, self.embedding(x).coords) for x in self.reduced.torsion.generators()]


def d_subgroup_reduction(g: GcGroup) -> ReductionReport:
    """Check that ``(d A) x| <t>`` inside ``g`` is a copy of ``G_c(m/d, n/d)``.

    The embedding sends the class of an ambient vector ``z`` in the reduced
    torsion to the class of ``d z`` in ``g.torsion``.
    """
    d = g.params.d
    if d == 1:
        raise PreconditionViolated("reduction needs gcd(m, n) > 1")
    A = g.torsion
    sub = subgroup_generated(A, [d * x for x in A.generators()])
    red = build_gc(g.params.reduced(), g.c)
    q = abs(g.n - g.m) // d
    images = [A.from_ambient([d * z for z in red.torsion.lift.col(j)]) for j in range(red.torsion.rank)]
    emb = AbHom.from_images(red.torsion, images, target=A)
    emb_image = image(emb)
    checks = {
        "psi_invariant": all(g.psi(x) in sub for x in sub.generators),
        "cyclic": sub.is_cyclic(),
        "order": sub.order == q ** g.c,
        "embedding_injective": emb_image.order == red.torsion.order,
        "embedding_onto_dA": emb_image == sub,
        "action_matches": all(g.psi(emb(x)) == emb(red.psi(x)) for x in red.torsion.generators()),
        "s_correspondence": emb(red.s) == d * g.s,
    }
    if red.nu is not None:
        checks["nu_action"] = g.psi(d * g.s) == red.nu * (d * g.s)
    return ReductionReport(g, red, sub, emb, checks)
