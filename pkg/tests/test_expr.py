from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from zeta_asym.coefficients import amzv_form
from zeta_asym.errors import NonNilpotentInput, UnmatchedShape
from zeta_asym.expr import (
    LEMMA_RULES,
    ExprSum,
    InvNSeries,
    TermExpr,
    build_exponent_series,
    exp_correction_series,
    integrate_exprsum,
    integrate_exprsum_numeric,
    integrate_term,
    load_integrand_table,
    louchard_integrand_series,
    parse_exprsum,
    series_constant,
    series_exp,
    series_log1p,
    series_mul,
)
from zeta_asym.mzv import AmzvCombination, AmzvIndex

T = ExprSum.term
L = T(1, q=1)
u = T(1, p=1)


def bar(m, k=0):
    return AmzvIndex.bar_ones(m, k)


def test_series_identities():
    s = InvNSeries(9, {1: L, 2: u * L})
    assert s + InvNSeries(9) == s
    assert series_mul(s, series_constant(1, 9)) == s
    sq = series_mul(InvNSeries(9, {2: L}), InvNSeries(9, {2: L}))
    assert sq == InvNSeries(9, {4: L * L})


def test_exp_log_inverse():
    assert series_exp(InvNSeries(9)) == series_constant(1, 9)
    s = InvNSeries(9, {1: L, 2: u})
    back = series_log1p(series_exp(s) - series_constant(1, 9))
    assert back == s


def test_nilpotent_guard():
    with pytest.raises(NonNilpotentInput):
        series_exp(series_constant(1, 4))
    with pytest.raises(NonNilpotentInput):
        series_log1p(series_constant(L, 4))


def test_exponent_series():
    D = build_exponent_series(6)
    assert D[2] == T(Fraction(-1, 12), p=3)
    assert D[4] == T(Fraction(-1, 80), p=5)
    assert D[6] == T(Fraction(-1, 448), p=7)
    assert not D[1] and not D[3]


def test_exp_step_order8():
    expected = (T(Fraction(-1, 2304), p=9) + T(Fraction(71, 268800), p=10)
                + T(Fraction(-1, 23040), p=11) + T(Fraction(1, 497664), p=12))
    assert exp_correction_series(8)[8] == expected
    table = load_integrand_table()
    for m in (2, 4, 6, 8):
        assert exp_correction_series(8)[m] == table[f"expstep{m}"].value


def test_integrand_examples():
    series = louchard_integrand_series(4)
    assert series[2] == L.scale(Fraction(1, 4))
    assert series[3] == (u * L + L * L).scale(Fraction(1, 8))
    assert series[4] == parse_exprsum("-u^3*E*C^-1 + 3 u*L^2 + 2 L^3").scale(Fraction(1, 48))


def test_integrand_golden():
    table = load_integrand_table()
    series = louchard_integrand_series(9)
    for m in range(2, 10):
        assert series[m] == table[f"order{m}"].value, m


def test_truncation_discipline():
    small = louchard_integrand_series(7)
    big = louchard_integrand_series(8)
    for m in range(2, 8):
        assert small[m] == big[m]
    assert exp_correction_series(8).truncate(6) == exp_correction_series(6)


def test_integrate_term_examples():
    assert integrate_term(TermExpr(1, q=1)) == AmzvCombination({bar(2): -1})
    assert integrate_term(TermExpr(1, p=2, k=1, r=2)) == AmzvCombination({bar(2): -2})
    assert integrate_term(TermExpr(1, p=3, k=1, r=1)) == AmzvCombination({bar(4): -6})
    with pytest.raises(UnmatchedShape):
        integrate_term(TermExpr(1, p=1))


def test_integrate_exprsum_examples():
    series = louchard_integrand_series(7)
    assert integrate_exprsum(series[2]) == AmzvCombination({bar(2): Fraction(-1, 4)})
    i4 = AmzvCombination({bar(4): 1, bar(3, 1): 1, bar(2, 2): -2}).scale(Fraction(1, 8))
    assert integrate_exprsum(series[4]) == i4
    i7 = AmzvCombination({bar(7): Fraction(-17, 2), bar(6, 1): 2, bar(5, 2): 2, bar(4, 3): -1,
                          bar(3, 4): -1, bar(2, 5): 2}).scale(Fraction(1, 8))
    assert integrate_exprsum(series[7]) == i7


def test_integrate_exprsum_all_orders():
    series = louchard_integrand_series(9)
    for m in range(2, 10):
        assert integrate_exprsum(series[m]) == amzv_form(m), m


def test_unmatched_shape_lists_terms():
    s = T(1, p=2, k=4, r=4) + T(1, q=1)
    with pytest.raises(UnmatchedShape) as info:
        integrate_exprsum(s)
    assert len(info.value.terms) == 1


@pytest.mark.slow
def test_symbolic_numeric_agreement():
    bits = 128
    for rule in LEMMA_RULES:
        lo, hi = rule.q_range
        for q in sorted({lo, min(hi if hi is not None else 7, 7)}):
            for p in sorted({max(rule.p_min, 0), 5, 9}):
                if isinstance(rule.shape, str):
                    s = T(1, p=p, k=1, q=q, r=3) - T(1, p=p, k=2, q=q, r=3)
                else:
                    s = T(1, p=p, k=rule.shape[0], q=q, r=rule.shape[1])
                num = integrate_exprsum_numeric(s, bits)
                rhs = rule.apply(p, q)
                sym = rhs.evaluate(bits)
                # the right side cancels heavily, so its rounding scales with sum |c|
                size = sum(abs(c) for c, _ in rhs.terms)
                with mp.workprec(bits + 20):
                    slack = num.error_estimate + num.tail_bound + mpf(2) ** (24 - bits) * max(1, size)
                    assert abs(num.value - sym) <= slack, (rule.name, p, q)


# -- property tests -------------------------------------------------------------

terms = st.builds(
    TermExpr,
    coef=st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool),
    p=st.integers(0, 3),
    k=st.integers(0, 3),
    q=st.integers(0, 2),
    r=st.integers(0, 3),
)
sums = st.lists(terms, min_size=0, max_size=4).map(ExprSum)


@settings(max_examples=40, deadline=None)
@given(sums, sums)
def test_canonical_form_is_sound(s1, s2):
    bits = 128
    for x in ("0.5", "1", "2", "5"):
        a, b = s1.evaluate(x, bits), s2.evaluate(x, bits)
        with mp.workprec(bits + 20):
            tol = mpf(2) ** -96 * max(1, abs(a), abs(b)) ** 2
            assert abs((s1 * s2).evaluate(x, bits) - a * b) <= tol
            assert abs((s1 + s2).evaluate(x, bits) - (a + b)) <= tol


@settings(max_examples=60, deadline=None)
@given(sums)
def test_text_round_trip(s):
    assert parse_exprsum(s.to_text()) == s


@settings(max_examples=40, deadline=None)
@given(sums, sums, sums)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
