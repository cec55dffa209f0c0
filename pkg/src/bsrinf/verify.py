"""Verification suites over parameter ranges.

Each suite returns a list of :class:`Check` records; the CLI prints them
and the test-suite asserts on them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd, prod

from .abelian import from_relation_matrix
from .degree import closed_form_degree, cross_check
from .gcgroup import BSParams, build_gc, d_subgroup_reduction, phi_matrix, verify_structure
from .intlinalg import (
    IntMatrix,
    bidiagonal_matrix,
    bidiagonal_snf_closed_form,
    determinant,
    snf,
)
from .twisted import (
    gc_has_rinf,
    make_automorphism,
    reidemeister_number,
    reidemeister_oracle,
    reversing_automorphisms,
)
from .errors import NotBijective, NotHomomorphism


@dataclass
class Check:
    name: str
    passed: bool = True
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, detail: str = "") -> None:
        self.cases += 1
        if not ok:
            self.passed = False
            if len(self.failures) < 10:
                self.failures.append(detail)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "cases": self.cases, "failures": self.failures}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  first failure: {self.failures[0]}" if self.failures else ""
        return f"{status}  {self.name} ({self.cases} cases){tail}"


def bs_pairs(max_n: int, *, coprime: bool | None = None, include_equal: bool = False):
    """Canonical ``(m, n)`` with ``1 <= m <= |n| <= max_n``, ordered by
    ``(|n|, n, m)``."""
    for an in range(1, max_n + 1):
        for n in (an, -an):
            for m in range(1, an + 1):
                if m == n and not include_equal:
                    continue
                if coprime is True and gcd(m, n) != 1:
                    continue
                if coprime is False and gcd(m, n) == 1:
                    continue
                yield m, n


def _snf_ok(a: IntMatrix) -> str | None:
    res = snf(a)
    if res.U @ a @ res.V != res.D:
        return "U A V != D"
    if abs(determinant(res.U)) != 1 or abs(determinant(res.V)) != 1:
        return "transform not unimodular"
    r, c = res.D.shape
    if any(res.D[i, j] for i in range(r) for j in range(c) if i != j):
        return "D not diagonal"
    ds = res.divisors
    if any(x < 0 for x in ds):
        return "negative divisor"
    for x, y in zip(ds, ds[1:]):
        if (x == 0 and y != 0) or (x != 0 and y % x):
            return f"divisor chain broken: {ds}"
    if a.is_square:
        det = determinant(a)
        if det and prod(ds) != abs(det):
            return "divisor product != |det|"
    return None


def check_snf(samples: int = 500, seed: int = 0, max_size: int = 6, max_entry: int = 50) -> list[Check]:
    rng = random.Random(seed)
    rand = Check("snf_random_matrices")
    for _ in range(samples):
        r, c = rng.randint(1, max_size), rng.randint(1, max_size)
        a = IntMatrix(r, c, tuple(rng.randint(-max_entry, max_entry) for _ in range(r * c)))
        problem = _snf_ok(a)
        rand.record(problem is None, f"{a}: {problem}")
    closed = Check("bidiagonal_closed_form")
    values = [v for x in range(2, 13) for v in (x, -x)]
    for a in values:
        for b in values:
            if gcd(a, b) != 1:
                continue
            for n in range(1, 7):
                for k in range(1, 4):
                    got = list(snf(bidiagonal_matrix(a, b, n, k)).divisors)
                    want = bidiagonal_snf_closed_form(a, b, n, k)
                    closed.record(got == want, f"a={a} b={b} n={n} k={k}: {got} != {want}")
    return [rand, closed]


def expected_factors(m: int, n: int, c: int) -> list[int]:
    """Invariant factors of ``A_c(m, n)`` with 1s dropped."""
    d = gcd(m, n)
    q = abs(n - m) // d
    return [f for f in [d] * (c - 1) + [d * q ** c] if f != 1]


def check_torsion_structure(max_n: int = 10, max_c: int = 4, max_order: int = 2 ** 20) -> list[Check]:
    order = Check("torsion_order")
    shape = Check("torsion_invariant_factors")
    reduction = Check("d_subgroup_reduction")
    for m, n in bs_pairs(max_n):
        for c in range(1, max_c + 1):
            if abs(n - m) ** c > max_order:
                continue
            A = from_relation_matrix(phi_matrix(m, n, c))
            order.record(A.order == abs(n - m) ** c, f"({m},{n},{c}): {A.order}")
            want = expected_factors(m, n, c)
            shape.record(list(A.invariant_factors) == want, f"({m},{n},{c}): {A.invariant_factors} != {want}")
            if gcd(m, n) > 1:
                rep = d_subgroup_reduction(build_gc(BSParams(m, n), c))
                bad = [k for k, v in rep.checks.items() if not v]
                reduction.record(rep.passed, f"({m},{n},{c}): {bad}")
    return [order, shape, reduction]


def check_lower_central(max_n: int = 8, max_c: int = 5) -> list[Check]:
    names = ["difference_powers_deep", "gamma_terms_cyclic", "torsion_cyclic_on_s", "class_bound", "defining_relation"]
    checks = {name: Check(name) for name in names}
    for m, n in bs_pairs(max_n, coprime=True):
        for c in range(1, max_c + 1):
            report = verify_structure(build_gc(BSParams(m, n), c))
            for name in names:
                checks[name].record(report[name], f"G_{c}({m},{n})")
    return [checks[name] for name in names]


def _units(modulus: int):
    return [u for u in range(1, max(modulus, 2)) if gcd(u, modulus) == 1] if modulus > 1 else [1]


def check_oracle(max_n: int = 10, max_order: int = 512, max_noncyclic: int = 8, max_c: int = 12) -> list[Check]:
    """Fast Reidemeister formula against the brute-force orbit count.

    Cyclic torsion: every unit ``mu`` with ``beta`` in ``{0, s}``.  Other
    torsion groups: the first ``max_noncyclic`` reversing automorphisms.
    ``epsilon = +1`` is checked with ``mu = 1``.  Trivial torsion
    (``|n - m| = 1``) would satisfy the order bound for every ``c``, so
    ``max_c`` bounds the class as well.
    """
    agree = Check("oracle_equivalence")
    plus = Check("orientation_preserving_infinite")
    beta_free = Check("beta_independence")
    for m, n in bs_pairs(max_n):
        c = 1
        while abs(n - m) ** c <= max_order and c <= max_c:
            g = build_gc(BSParams(m, n), c)
            c += 1
            ident = make_automorphism(g, 1, 0, 1)
            rn, ro = reidemeister_number(ident), reidemeister_oracle(ident)
            plus.record(rn.is_infinite and ro.is_infinite, g.label)
            if g.torsion.is_cyclic:
                actions = []
                for mu in _units(g.torsion.order):
                    try:
                        actions.append(make_automorphism(g, mu, 0, -1).action_on_a)
                    except NotHomomorphism:
                        continue
            else:
                actions = []
                for h in reversing_automorphisms(g):
                    actions.append(h)
                    if len(actions) >= max_noncyclic:
                        break
            for h in actions:
                values = set()
                for beta in (0, 1):
                    phi = make_automorphism(g, h, beta, -1)
                    fast, slow = reidemeister_number(phi), reidemeister_oracle(phi)
                    agree.record(fast == slow, f"{phi}: {fast} vs {slow}")
                    values.add(fast)
                beta_free.record(len(values) == 1, f"{g.label} M={h.matrix.tolist()}")
    return [agree, plus, beta_free]


def check_criterion(max_n: int = 10, max_order: int = 4096, max_c: int = 12) -> list[Check]:
    """Brute force over units ``mu``: a valid ``epsilon = -1`` automorphism
    exists exactly when ``n + m`` is divisible by ``|n - m|^(c-1)``."""
    equiv = Check("criterion_equivalence")
    paths = Check("criterion_vs_search")
    for m, n in bs_pairs(max_n, coprime=True):
        c = 1
        while abs(n - m) ** c <= max_order and c <= max_c:
            g = build_gc(BSParams(m, n), c)
            c += 1
            exists = False
            for mu in _units(g.torsion.order):
                try:
                    make_automorphism(g, mu, 0, -1)
                except (NotHomomorphism, NotBijective):
                    continue
                exists = True
                break
            crit = (n + m) % (abs(n - m) ** (g.c - 1)) == 0
            equiv.record(exists == crit, f"{g.label}: brute force {exists}, congruence {crit}")
            a = gc_has_rinf(g, "criterion").has_rinf
            b = gc_has_rinf(g, "search").has_rinf
            paths.record(a == b, f"{g.label}: criterion {a}, search {b}")
    g = build_gc(BSParams(1, 3), 2)
    phi = make_automorphism(g, 1, 0, -1)
    inst = Check("instance_R_equals_6")
    inst.record(reidemeister_number(phi).count == 6 and reidemeister_oracle(phi).count == 6, str(phi))
    return [equiv, paths, inst]


def check_transfer(max_n: int = 10, max_c: int = 8) -> list[Check]:
    """R-infinity of the reduced group forces it on the original one."""
    transfer = Check("reduced_group_transfer")
    for m, n in bs_pairs(max_n, coprime=False):
        p = BSParams(m, n)
        if n == -m:
            continue
        red = p.reduced()
        for c in range(1, max_c + 1):
            if gc_has_rinf(build_gc(red, c)).has_rinf:
                transfer.record(gc_has_rinf(build_gc(p, c)).has_rinf, f"G_{c}({m},{n})")
    return [transfer]


def check_degrees(max_n: int = 10, c_max: int = 12) -> list[Check]:
    coprime = Check("degree_coprime_cross_check")
    general = Check("degree_general_cross_check")
    for m, n in bs_pairs(max_n, include_equal=True):
        p = BSParams(m, n)
        rep = cross_check(p, c_max, strict=False)
        target = coprime if p.d == 1 else general
        target.record(rep.consistent, f"({m},{n}): {rep.message}")
    return [coprime, general]


def check_infinite_cases(max_n: int = 10, c_max: int = 20) -> list[Check]:
    """Coprime cases with infinite degree satisfy the congruence for every c."""
    chk = Check("infinite_cases_congruence")
    for m, n in bs_pairs(max_n, coprime=True, include_equal=True):
        p = BSParams(m, n)
        if closed_form_degree(p).kind != "infinite" or m == n:
            continue
        ok = all((n + m) % (abs(n - m) ** (c - 1)) == 0 for c in range(1, c_max + 1))
        chk.record(ok, f"({m},{n})")
    return [chk]


SCOPES = {
    "snf": [check_snf],
    "structure": [check_torsion_structure],
    "lemmas": [check_lower_central],
    "oracle": [check_oracle, check_criterion],
    "transfer": [check_transfer],
    "degree": [check_degrees, check_infinite_cases],
}


def run_scope(scope: str, **kwargs) -> list[Check]:
    """Run one named scope (or ``all``); keyword arguments are passed to
    every suite that accepts them."""
    import inspect

    names = list(SCOPES) if scope == "all" else [scope]
    out: list[Check] = []
    for name in names:
        for fn in SCOPES[name]:
            params = inspect.signature(fn).parameters
            out.extend(fn(**{k: v for k, v in kwargs.items() if k in params and v is not None}))
    return out
