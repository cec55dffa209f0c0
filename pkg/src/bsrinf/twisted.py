"""Automorphisms of ``G_c(m, n)``, twisted conjugacy and Reidemeister numbers.

An automorphism is recorded as ``a -> M(a)`` on the torsion together with
``t -> beta * t**epsilon``.  It is a homomorphism exactly when
``M psi = psi**epsilon M``, and bijective exactly when ``M`` is.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator

from .abelian import (
    AbElement,
    AbHom,
    AbSubgroup,
    cokernel_order,
    common_kernel,
    compose,
    enumerate_automorphisms,
    subgroup_generated,
    DEFAULT_AUTOMORPHISM_CAP,
)
from .errors import BoundExceeded, Inconsistency, InvalidInput, NotBijective, NotHomomorphism, ParentMismatch
from .gcgroup import GcElement, GcGroup, inverse, multiply

__all__ = [
    "GcAutomorphism",
    "ReidemeisterNumber",
    "make_automorphism",
    "are_twisted_conjugate",
    "reidemeister_number",
    "reidemeister_oracle",
    "RinfVerdict",
    "gc_has_rinf",
    "reversing_automorphisms",
    "find_reversing_automorphism",
    "default_oracle_cap",
]

DEFAULT_ORACLE_CAP = 4096


def default_oracle_cap() -> int:
    raw = os.environ.get("BSRINF_ORACLE_CAP")
    return int(raw) if raw else DEFAULT_ORACLE_CAP


@dataclass(frozen=True)
class ReidemeisterNumber:
    """``count`` is ``None`` for infinitely many classes."""

    count: int | None

    def __post_init__(self):
        if self.count is not None and self.count < 1:
            raise InvalidInput("a finite Reidemeister number is at least 1")

    @classmethod
    def infinite(cls) -> ReidemeisterNumber:
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.count is None

    def __str__(self):
        return "Infinite" if self.count is None else f"Finite({self.count})"

    def as_dict(self) -> dict:
        if self.count is None:
            return {"kind": "infinite"}
        return {"kind": "finite", "count": self.count}


@dataclass(frozen=True, eq=False)
class GcAutomorphism:
    group: GcGroup
    action_on_a: AbHom
    beta: AbElement
    epsilon: int

    @property
    def t_image(self) -> GcElement:
        return GcElement(self.beta, self.epsilon)

    def __call__(self, x: GcElement) -> GcElement:
        g = self.group
        head = GcElement(self.action_on_a(x.a), 0)
        return multiply(g, head, g.power(self.t_image, x.k))

    def __repr__(self):
        return (f"GcAutomorphism({self.group.label}, M={self.action_on_a.matrix.tolist()}, "
                f"beta={self.beta.coords}, eps={self.epsilon:+d})")


def _intertwines(g: GcGroup, m_a: AbHom, epsilon: int) -> bool:
    psi_eps = g.psi if epsilon == 1 else g.psi_inverse
    return compose(m_a, g.psi) == compose(psi_eps, m_a)


def make_automorphism(group: GcGroup, action_on_a: AbHom | int, beta: AbElement | int | None = None,
                      epsilon: int = -1) -> GcAutomorphism:
    """Validate and build an automorphism.

    ``action_on_a`` may be an integer ``mu`` (multiplication by ``mu``) and
    ``beta`` an integer (meaning ``beta * s``).
    """
    if epsilon not in (1, -1):
        raise InvalidInput("epsilon must be +1 or -1")
    A = group.torsion
    if isinstance(action_on_a, int):
        action_on_a = AbHom.multiplication(A, action_on_a)
    elif action_on_a.source != A or action_on_a.target != A:
        raise ParentMismatch("action must be an endomorphism of the torsion subgroup")
    if beta is None:
        beta = A.zero()
    elif isinstance(beta, int):
        beta = beta * group.s
    elif beta.group != A:
        raise ParentMismatch("beta must lie in the torsion subgroup")
    if not _intertwines(group, action_on_a, epsilon):
        raise NotHomomorphism(f"M psi != psi^{epsilon} M on {group.label}")
    if not _is_bijective(action_on_a):
        raise NotBijective(f"action on torsion of {group.label} is not invertible")
    return GcAutomorphism(group, action_on_a, beta, epsilon)


def _is_bijective(h: AbHom) -> bool:
    return subgroup_generated(h.target, h.images(), method="lattice").order == h.target.order


def _twist(phi: GcAutomorphism, z: GcElement, y: GcElement) -> GcElement:
    g = phi.group
    return multiply(g, multiply(g, z, y), inverse(g, phi(z)))


def are_twisted_conjugate(phi: GcAutomorphism, x: GcElement, y: GcElement) -> bool:
    """Is there ``z`` with ``x = z y phi(z)^-1``?

    Conjugating by ``z = b t^j`` moves the t-exponent by ``(1 - epsilon) j``.
    For ``epsilon = -1`` that forces ``j``; for ``epsilon = +1`` the
    t-part acts as a permutation of one level, so ``j`` only needs to run
    over one cycle of it.  The torsion part ``b`` is searched exhaustively.
    """
    g = phi.group
    A = g.torsion
    for e in (x, y):
        if e.a.group != A:
            raise ParentMismatch(f"element not in {g.label}")
    if phi.epsilon == -1:
        diff = x.k - y.k
        if diff % 2:
            return False
        shifts = [_twist(phi, GcElement(A.zero(), diff // 2), y)]
    else:
        if x.k != y.k:
            return False
        shifts = [y]
        w = _twist(phi, g.t, y)
        while w != y:
            shifts.append(w)
            w = _twist(phi, g.t, w)
    for w in shifts:
        for b in A.elements():
            if _twist(phi, GcElement(b, 0), w) == x:
                return True
    return False


def reidemeister_number(phi: GcAutomorphism) -> ReidemeisterNumber:
    """Count of twisted conjugacy classes.

    With ``epsilon = -1`` every class meets t-level 0 or 1, and on level
    ``k`` the torsion acts by translations through ``Im(id - psi^-k M)``.
    """
    if phi.epsilon == 1:
        return ReidemeisterNumber.infinite()
    g = phi.group
    ident = AbHom.identity(g.torsion)
    m_a = phi.action_on_a
    even = cokernel_order(ident - m_a)
    odd = cokernel_order(ident - compose(g.psi_inverse, m_a))
    return ReidemeisterNumber(even + odd)


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _level_classes(phi: GcAutomorphism, level: int) -> int:
    g = phi.group
    A = g.torsion
    elems = [GcElement(a, level) for a in A.elements()]
    index = {e: i for i, e in enumerate(elems)}
    parent = list(range(len(elems)))
    movers = []
    for gen in A.generators():
        z = GcElement(gen, 0)
        movers.append((z, inverse(g, phi(z))))
    for i, e in enumerate(elems):
        for z, tail in movers:
            j = index[multiply(g, multiply(g, z, e), tail)]
            ri, rj = _find(parent, i), _find(parent, j)
            if ri != rj:
                parent[ri] = rj
    return sum(1 for i in range(len(elems)) if _find(parent, i) == i)


def _level_classes_pairwise(phi: GcAutomorphism, level: int) -> int:
    reps: list[GcElement] = []
    for a in phi.group.torsion.elements():
        x = GcElement(a, level)
        if not any(are_twisted_conjugate(phi, x, r) for r in reps):
            reps.append(x)
    return len(reps)


def reidemeister_oracle(phi: GcAutomorphism, cap: int | None = None, *, pairwise: bool = False) -> ReidemeisterNumber:
    """Brute-force Reidemeister number, independent of any cokernel algebra.

    ``epsilon = +1``: the t-level of ``z y phi(z)^-1`` equals that of ``y``,
    so distinct levels give infinitely many classes.  ``epsilon = -1``:
    the elements of t-level 0 and 1 are partitioned into orbits of the
    twisted action of the torsion, by union-find over the action of its
    generators, or (``pairwise=True``) by testing each element against
    the representatives found so far.
    """
    g = phi.group
    cap = default_oracle_cap() if cap is None else cap
    if g.torsion.order > cap:
        raise BoundExceeded(f"torsion order {g.torsion.order} exceeds oracle cap {cap}",
                            count=g.torsion.order, cap=cap)
    if phi.epsilon == 1:
        image_t = phi(g.t)
        if image_t.k != 1 or are_twisted_conjugate(phi, g.identity(), g.t):
            raise Inconsistency("level is not preserved by an epsilon=+1 automorphism")
        return ReidemeisterNumber.infinite()
    count = _level_classes_pairwise if pairwise else _level_classes
    return ReidemeisterNumber(count(phi, 0) + count(phi, 1))


def _reversal_system(g: GcGroup) -> tuple[AbSubgroup, list[AbHom]]:
    """Admissible images of ``s`` for a ``psi``-reversing endomorphism.

    Such an ``M`` is fixed by ``x = M(s)``: the ambient generators satisfy
    ``e_{i+1} = (psi - 1) e_i``, so ``M(e_i) = (psi^-1 - 1)^(i-1) x``.  The
    assignment is well defined and reverses ``psi`` exactly when it kills
    every relation column and ``psi^-1`` fixes the image of ``e_c``; those
    ``x`` form a subgroup.  Returns that subgroup and the linear maps
    ``x -> M(g_j)`` for the invariant-factor generators ``g_j``.
    """
    A = g.torsion
    c = g.c
    rel = A.relations
    step = g.psi_inverse - AbHom.identity(A)
    chain = [AbHom.identity(A)]
    for _ in range(c):
        chain.append(compose(step, chain[-1]))
    zero = AbHom.zero(A)
    checks = []
    for j in range(c):
        h = zero
        for i in range(c):
            if rel[i, j]:
                h = h + rel[i, j] * chain[i]
        checks.append(h)
    checks.append(chain[c])
    gen_maps = []
    for j in range(A.rank):
        h = zero
        for i in range(c):
            if A.lift[i, j]:
                h = h + A.lift[i, j] * chain[i]
        gen_maps.append(h)
    return common_kernel(A, checks), gen_maps


def reversing_automorphisms(g: GcGroup) -> Iterator[AbHom]:
    """Every automorphism ``M`` of the torsion with ``M psi = psi^-1 M``,
    by trying each admissible image of ``s`` in coordinate order."""
    A = g.torsion
    if A.rank == 0:
        yield AbHom.identity(A)
        return
    admissible, gen_maps = _reversal_system(g)
    for x in sorted(admissible.elements(), key=lambda e: e.coords):
        m_a = AbHom.from_images(A, [h(x) for h in gen_maps])
        if _intertwines(g, m_a, -1) and _is_bijective(m_a):
            yield m_a


def _bezout(values: list[int]) -> tuple[int, list[int]]:
    """``g = gcd(values)`` and coefficients with ``sum(a * v) == g``."""
    g, coeffs = 0, []
    for v in values:
        # extend g = sum(coeffs * values) to include v
        old_r, r = g, v
        old_s, s_ = 1, 0
        old_t, t_ = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s_ = s_, old_s - q * s_
            old_t, t_ = t_, old_t - q * t_
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [old_s * a for a in coeffs] + [old_t]
        g = old_r
    return g, coeffs


def find_reversing_automorphism(g: GcGroup) -> AbHom | None:
    """One torsion automorphism reversing ``psi``, or ``None``.

    ``psi - 1`` is nilpotent on the torsion, so the ring generated by
    ``psi`` is local on each primary part and (Nakayama) ``M`` is onto
    exactly when ``x = M(s)`` generates the torsion modulo
    ``(psi - 1)A``.  That quotient is ``Z_|n-m|``, read off as the first
    ambient coordinate, so existence reduces to a gcd over generators of
    the admissible subgroup; a Bezout combination supplies the witness.
    """
    A = g.torsion
    if A.rank == 0:
        return AbHom.identity(A)
    admissible, gen_maps = _reversal_system(g)
    modulus = abs(g.n - g.m)
    top = A.lift.row(0)
    gens = list(admissible.generators)
    values = [sum(a * b for a, b in zip(top, x.coords)) % modulus for x in gens]
    common, coeffs = _bezout(values + [modulus])
    if common != 1:
        return None
    x = A.zero()
    for a, gen in zip(coeffs, gens):
        x = x + a * gen
    m_a = AbHom.from_images(A, [h(x) for h in gen_maps])
    if not (_intertwines(g, m_a, -1) and _is_bijective(m_a)):
        raise Inconsistency(f"constructed reversing map on {g.label} failed verification")
    return m_a


@dataclass
class RinfVerdict:
    has_rinf: bool
    method: str
    witness: GcAutomorphism | None = None

    def as_dict(self) -> dict:
        out = {"has_rinf": self.has_rinf, "method": self.method}
        if self.witness is not None:
            out["witness"] = {
                "action_on_a": self.witness.action_on_a.matrix.tolist(),
                "beta": list(self.witness.beta.coords),
                "epsilon": self.witness.epsilon,
            }
        return out


def _criterion_holds(g: GcGroup) -> bool:
    # n + m = 0 mod |n - m|^(c-1): no R-infinity
    return (g.n + g.m) % (abs(g.n - g.m) ** (g.c - 1)) == 0


def gc_has_rinf(g: GcGroup, method: str = "auto", aut_cap: int = DEFAULT_AUTOMORPHISM_CAP) -> RinfVerdict:
    """Does every automorphism of ``g`` have infinitely many twisted classes?

    Equivalent to: no torsion automorphism reverses ``psi``.  Methods:

    ``criterion``
        coprime ``m, n`` only: ``n + m`` divisible by ``|n - m|^(c-1)``
        means R-infinity fails; the witness is ``mu = 1``.
    ``search``
        gcd test on the admissible images of ``s``
        (see :func:`find_reversing_automorphism`).
    ``exhaustive``
        every admissible image of ``s`` (see :func:`reversing_automorphisms`).
    ``enumerate``
        exhaustive over all torsion automorphisms, capped by ``aut_cap``.
    ``auto``
        ``criterion`` when coprime, else ``search``.
    """
    if method == "auto":
        method = "criterion" if g.params.d == 1 else "search"
    if method == "criterion":
        if g.params.d != 1:
            raise InvalidInput("the congruence criterion needs gcd(m, n) = 1")
        if not _criterion_holds(g):
            return RinfVerdict(True, method)
        try:
            witness = make_automorphism(g, 1, 0, -1)
        except (NotHomomorphism, NotBijective) as exc:
            raise Inconsistency(f"criterion holds on {g.label} but mu=1 fails: {exc}") from exc
        return RinfVerdict(False, method, witness)
    if method == "search":
        found = find_reversing_automorphism(g)
        candidates = [] if found is None else [found]
    elif method == "exhaustive":
        candidates = reversing_automorphisms(g)
    elif method == "enumerate":
        candidates = (h for h in enumerate_automorphisms(g.torsion, aut_cap) if _intertwines(g, h, -1))
    else:
        raise InvalidInput(f"unknown method {method!r}")
    for m_a in candidates:
        return RinfVerdict(False, method, make_automorphism(g, m_a, None, -1))
    return RinfVerdict(True, method)
