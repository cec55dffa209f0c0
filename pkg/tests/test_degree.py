import pytest
from hypothesis import given, strategies as st

from bsrinf.degree import (
    CASE_LABELS,
    DegreeResult,
    case_label,
    closed_form_degree,
    cross_check,
    p_exponent,
    search_degree,
)
from bsrinf.errors import Inconsistency, InvalidInput, NonDivisor
from bsrinf.gcgroup import BSParams


def P(m, n):
    return BSParams.of(m, n)


@pytest.mark.parametrize("m,d,p", [(1, 1, 2), (3, 1, 3), (2, 2, 2), (7, 1, 4), (6, 2, 3)])
def test_p_exponent(m, d, p):
    assert p_exponent(m, d) == p


def test_p_exponent_needs_divisor():
    with pytest.raises(NonDivisor):
        p_exponent(3, 2)


@pytest.mark.parametrize("m,n,text,label", [
    (1, 2, "Infinite", "diff_eq_d"),
    (1, 3, "Exact(4)", "diff_eq_2d"),
    (3, 5, "Exact(5)", "diff_eq_2d"),
    (2, 5, "Exact(2)", "diff_ge_3d"),
    (1, -1, "Infinite", "n_eq_minus_m"),
    (2, 6, "Interval(2, 4)", "diff_eq_2d"),
    (4, 10, "Exact(2)", "diff_ge_3d"),
    (2, 4, "Infinite", "diff_eq_d"),
    (1, -2, "Exact(2)", "n_negative"),
    (3, 3, "Infinite", "n_eq_m"),
])
def test_closed_form_examples(m, n, text, label):
    res = closed_form_degree(P(m, n))
    assert str(res) == text
    assert res.case_label == label


@given(st.integers(1, 40), st.integers(-40, 40).filter(lambda n: n != 0))
def test_case_label_total(m, n):
    p = BSParams.of(m, n)
    assert case_label(p) in CASE_LABELS
    res = closed_form_degree(p)
    if res.kind == "interval":
        assert p.d > 1 and p.n - p.m == 2 * p.d
        assert 2 <= res.lower <= res.upper
    if res.kind == "exact":
        assert res.value >= 2


def test_interval_only_when_not_coprime():
    with pytest.raises(InvalidInput):
        DegreeResult(P(1, 3), "interval", "diff_eq_2d", lower=2, upper=4)


def test_search_examples():
    assert str(search_degree(P(1, 3), 10)) == "Exact(4)"
    assert str(search_degree(P(1, 2), 10)) == "NotFoundUpTo(10)"
    found = search_degree(P(2, 6), 8)
    assert found.found and 2 <= found.value <= 4


def test_search_rejects_pm_equal():
    with pytest.raises(InvalidInput):
        search_degree(P(2, -2), 5)
    with pytest.raises(InvalidInput):
        search_degree(P(2, 2), 5)


@pytest.mark.parametrize("m,n", [(1, 3), (3, 5), (1, -1), (2, 6), (4, 10), (6, 10), (2, 4)])
def test_cross_check_consistent(m, n):
    rep = cross_check(P(m, n), 12)
    assert rep.consistent


def test_cross_check_reports_threshold():
    rep = cross_check(P(2, 6), 8)
    d = rep.closed_form.as_dict()
    assert d["kind"] == "interval" and d["gc_threshold"] == 4
    assert d["lower"] == 2 and d["upper"] == 4


def test_cross_check_flags_bad_closed_form(monkeypatch):
    import bsrinf.degree as degree

    real = degree.closed_form_degree

    def wrong(params):
        res = real(params)
        if res.kind == "exact":
            res.value += 1
        return res

    monkeypatch.setattr(degree, "closed_form_degree", wrong)
    with pytest.raises(Inconsistency):
        degree.cross_check(P(1, 3), 12)
    assert not degree.cross_check(P(1, 3), 12, strict=False).consistent
