"""The R-infinity nilpotency degree of ``BS(m, n)``.

Two routes: the closed-form case table, and a search for the least ``c``
such that ``G_c(m, n)`` has the R-infinity property.  For coprime
parameters ``G_c(m, n)`` is the full nilpotent quotient and the search
gives the degree itself; otherwise it gives an upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .abelian import DEFAULT_AUTOMORPHISM_CAP
from .errors import Inconsistency, InvalidInput, NonDivisor
from .gcgroup import BSParams, build_gc
from .twisted import gc_has_rinf

__all__ = [
    "CASE_LABELS",
    "DegreeResult",
    "SearchResult",
    "p_exponent",
    "case_label",
    "closed_form_degree",
    "search_degree",
    "cross_check",
    "CrossCheckReport",
    "DEFAULT_C_MAX",
    "SWEEP_C_MAX",
]

DEFAULT_C_MAX = 20
SWEEP_C_MAX = 12

CASE_LABELS = ("n_negative", "n_eq_minus_m", "n_eq_m", "diff_eq_d", "diff_eq_2d", "diff_ge_3d")


def p_exponent(m: int, d: int) -> int:
    """Largest ``p`` with ``2**p`` dividing ``2*(m/d) + 2``."""
    if d == 0 or m % d:
        raise NonDivisor(f"{d} does not divide {m}")
    q = m // d
    if q < 1:
        raise InvalidInput("m/d must be positive")
    v = 2 * q + 2
    return (v & -v).bit_length() - 1


def case_label(params: BSParams) -> str:
    m, n, d = params.m, params.n, params.d
    if n == -m:
        return "n_eq_minus_m"
    if n < 0:
        return "n_negative"
    if n == m:
        return "n_eq_m"
    diff = n - m
    if diff == d:
        return "diff_eq_d"
    if diff == 2 * d:
        return "diff_eq_2d"
    return "diff_ge_3d"


@dataclass
class SearchResult:
    """Least ``c <= c_max`` with ``G_c`` having R-infinity, or ``None``."""

    c_max: int
    value: int | None
    verdicts: dict[int, bool] = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.value is not None

    def __str__(self):
        return f"Exact({self.value})" if self.found else f"NotFoundUpTo({self.c_max})"

    def as_dict(self) -> dict:
        if self.found:
            return {"kind": "exact", "value": self.value, "c_max": self.c_max}
        return {"kind": "not_found", "c_max": self.c_max}


@dataclass
class DegreeResult:
    params: BSParams
    kind: str  # "exact", "infinite" or "interval"
    case_label: str
    value: int | None = None
    lower: int | None = None
    upper: int | None = None
    p: int | None = None
    method: str = "closed_form"
    search: SearchResult | None = None

    def __post_init__(self):
        if self.kind not in ("exact", "infinite", "interval"):
            raise InvalidInput(f"unknown kind {self.kind!r}")
        if self.kind == "exact" and (self.value is None or self.value < 2):
            raise InvalidInput("an exact degree is at least 2")
        if self.kind == "interval":
            if self.lower is None or self.upper is None or not 2 <= self.lower <= self.upper:
                raise InvalidInput("interval bounds must satisfy 2 <= lower <= upper")
            if self.params.d == 1:
                raise InvalidInput("intervals only arise for gcd(m, n) > 1")

    @property
    def gc_threshold(self) -> int | None:
        """Least ``c`` found by search; an upper bound when ``d > 1``."""
        return self.search.value if self.search is not None else None

    def __str__(self):
        if self.kind == "exact":
            body = f"Exact({self.value})"
        elif self.kind == "infinite":
            body = "Infinite"
        else:
            body = f"Interval({self.lower}, {self.upper})"
        return body

    def as_dict(self) -> dict:
        out = {
            "params": self.params.as_dict(),
            "kind": self.kind,
            "case": self.case_label,
            "method": self.method,
        }
        if self.kind == "exact":
            out["value"] = self.value
        elif self.kind == "interval":
            out["lower"] = self.lower
            out["upper"] = self.upper
        if self.p is not None:
            out["p"] = self.p
        if self.search is not None:
            out["search"] = self.search.as_dict()
            out["gc_threshold"] = self.gc_threshold
        return out


def closed_form_degree(params: BSParams) -> DegreeResult:
    label = case_label(params)
    if label in ("n_eq_minus_m", "n_eq_m", "diff_eq_d"):
        return DegreeResult(params, "infinite", label)
    if label in ("n_negative", "diff_ge_3d"):
        return DegreeResult(params, "exact", label, value=2)
    p = p_exponent(params.m, params.d)
    if params.d == 1:
        return DegreeResult(params, "exact", label, value=p + 2, p=p)
    return DegreeResult(params, "interval", label, lower=2, upper=p + 2, p=p)


def search_degree(params: BSParams, c_max: int = DEFAULT_C_MAX, *, method: str = "auto",
                  aut_cap: int = DEFAULT_AUTOMORPHISM_CAP) -> SearchResult:
    """Test ``c = 1, ..., c_max`` independently and report the least hit."""
    if params.n in (params.m, -params.m):
        raise InvalidInput("search needs m != +-n")
    if c_max < 1:
        raise InvalidInput("c_max must be >= 1")
    result = SearchResult(c_max, None)
    for c in range(1, c_max + 1):
        verdict = gc_has_rinf(build_gc(params, c), method=method, aut_cap=aut_cap)
        result.verdicts[c] = verdict.has_rinf
        if verdict.has_rinf:
            result.value = c
            break
    return result


@dataclass
class CrossCheckReport:
    closed_form: DegreeResult
    search: SearchResult | None
    consistent: bool
    message: str = ""


def _compare(closed: DegreeResult, found: SearchResult) -> str | None:
    d = closed.params.d
    if closed.kind == "infinite":
        if found.found:
            return f"search found c={found.value} but the degree is infinite"
        return None
    upper = closed.value if closed.kind == "exact" else closed.upper
    if not found.found:
        if found.c_max >= upper:
            return f"search found nothing up to {found.c_max} but the degree is at most {upper}"
        return None
    if closed.kind == "exact" and d == 1 and found.value != closed.value:
        return f"search gave {found.value}, closed form {closed.value}"
    if found.value > upper:
        return f"search gave {found.value} above the upper bound {upper}"
    if found.value < 2:
        return f"search gave {found.value} < 2"
    return None


def cross_check(params: BSParams, c_max: int = DEFAULT_C_MAX, *, strict: bool = True,
                method: str = "search", aut_cap: int = DEFAULT_AUTOMORPHISM_CAP) -> CrossCheckReport:
    """Run both routes and compare them.

    The search defaults to constructing reversing automorphisms directly,
    so coprime cases do not lean on the congruence criterion.  ``m = +-n``
    has no search route and is answered by the closed form only.  With
    ``strict`` an inconsistency raises :class:`Inconsistency`.
    """
    closed = closed_form_degree(params)
    if params.n in (params.m, -params.m):
        closed.method = "closed_form"
        return CrossCheckReport(closed, None, True, "closed form only")
    found = search_degree(params, c_max, method=method, aut_cap=aut_cap)
    closed.search = found
    closed.method = "both"
    problem = _compare(closed, found)
    if problem and strict:
        raise Inconsistency(f"BS({params.m},{params.n}): {problem}")
    return CrossCheckReport(closed, found, problem is None, problem or "")
