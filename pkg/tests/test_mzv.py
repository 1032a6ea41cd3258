from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from zeta_asym.errors import DivergentIndex, DomainError, ShapeError, TableFormatError
from zeta_asym.hp import zeta_value
from zeta_asym.mzv import (
    AmzvCombination,
    AmzvIndex,
    RuleTable,
    ZetaMonomial,
    ZetaPolynomial,
    amzv_converges,
    amzv_eval_lemma,
    amzv_nested_sum,
    default_rule_table,
    lemma_paths,
    parse_index,
    verify_reduction,
    zagier_check,
    zeta33_stuffle,
    zeta_bar_closed,
)

from conftest import close

z = AmzvIndex.of


def test_convergence():
    assert not amzv_converges(z(1, 2))
    assert amzv_converges(z(-1))
    assert amzv_converges(z(-2, 1, 1))


def test_index_text_round_trip():
    for idx in [z(-2), z(-3, 1), z(-2, 1, 1, 1, 1, 1), z(3, 3), z(-2, 1, -2, 1)]:
        assert parse_index(str(idx)) == idx
    assert str(z(-2, 1, 1, 1, 1)) == "z(b2,1^4)"
    assert parse_index("z(b3,1^2)") == z(-3, 1, 1)
    assert z(-4, 1, 1).weight == 6 and z(-4, 1, 1).depth == 3
    assert z(-4, 1, 1).bar_ones_shape() == (4, 2)
    assert z(3, 3).bar_ones_shape() is None
    with pytest.raises(DomainError):
        AmzvIndex(())


def test_polynomial_arithmetic():
    p = ZetaPolynomial.parse("1/2 z2 - z3")
    q = ZetaPolynomial.parse("z3")
    assert (p + q) == ZetaPolynomial.parse("1/2 z2")
    assert (q * q) == ZetaPolynomial.parse("z3^2")
    assert ZetaMonomial.of(2, 3).weight == 5
    c = AmzvCombination.parse("z(b2) + 2 z(b2,1)") - AmzvCombination.parse("z(b2)")
    assert c == AmzvCombination({z(-2, 1): 2})


@pytest.mark.parametrize("n,coef", [(2, Fraction(-1, 2)), (4, Fraction(-7, 8)), (8, Fraction(-127, 128))])
def test_zeta_bar_closed(n, coef):
    assert zeta_bar_closed(n) == ZetaPolynomial({ZetaMonomial.of(n): coef})


def test_zeta_bar_closed_domain():
    with pytest.raises(DomainError):
        zeta_bar_closed(1)


def test_nested_sum_examples():
    v, _ = amzv_nested_sum(z(-1), 10 ** 6)
    with mp.workprec(100):
        assert abs(v + mpmath.log(2)) < mpf(10) ** -6
    v, _ = amzv_nested_sum(z(-2), 10 ** 5)
    assert close(v, zeta_bar_closed(2).evaluate(128), mpf(10) ** -8)
    v, err = amzv_nested_sum(z(2, 1), 10 ** 5)
    assert close(v, zeta_value(3), mpf(10) ** -4)
    assert err > 0


def test_nested_sum_improves_with_n():
    ref = zeta_value(3, 128)
    with mp.workprec(128):
        errs = [abs(amzv_nested_sum(z(2, 1), N)[0] - ref) for N in (10 ** 3, 10 ** 4, 10 ** 5)]
    assert errs[0] > errs[1] > errs[2]


def test_nested_sum_errors():
    with pytest.raises(DivergentIndex):
        amzv_nested_sum(z(1, 2), 100)
    with pytest.raises(DomainError):
        amzv_nested_sum(z(2), 5)


def test_lemma_examples():
    with mp.workprec(220):
        assert close(amzv_eval_lemma(z(-2), 192), -zeta_value(2, 192) / 2, mpf(10) ** -30, 192)
        assert close(amzv_eval_lemma(z(-2, 1), 192), zeta_value(3, 192) / 8, mpf(10) ** -30, 192)
    paths = lemma_paths(z(-3, 1), 192)
    (v1, e1), (v2, e2) = paths["part1"], paths["part2"]
    assert close(v1, v2, e1 + e2 + mpf(2) ** -170, 192)


def test_lemma_shape_error():
    with pytest.raises(ShapeError):
        amzv_eval_lemma(z(3, 3), 128)
    with pytest.raises(ShapeError):
        amzv_eval_lemma(z(-2, -1), 128)


@pytest.mark.parametrize("m", range(2, 10))
def test_lemma_matches_closed_form(m):
    bits = 192
    assert close(amzv_eval_lemma(z(-m), bits), zeta_bar_closed(m).evaluate(bits), mpf(2) ** (32 - bits), bits)


@pytest.mark.slow
@pytest.mark.parametrize("m", range(2, 8))
def test_dual_path(m):
    for k in range(1, 6):
        paths = lemma_paths(AmzvIndex.bar_ones(m, k), 128)
        (v1, e1), (v2, e2) = paths["part1"], paths["part2"]
        assert close(v1, v2, e1 + e2 + mpf(2) ** -110, 128), (m, k)


@pytest.mark.slow
def test_oracle_agreement():
    for m in range(1, 9):
        for k in range(0, 9 - m):
            idx = AmzvIndex.bar_ones(m, k)
            if m == 1 and k == 0:
                continue
            v, err = amzv_nested_sum(idx, 10 ** 5)
            ref = amzv_eval_lemma(idx, 128)
            assert close(v, ref, err, 128), str(idx)


def test_rule_table_loads_homogeneous():
    rules = default_rule_table()
    assert len(rules) > 20
    for idx in rules:
        rule = rules[idx]
        assert all(m.weight == idx.weight for m in rule.rhs_zeta.keys())
        assert all(i.weight == idx.weight for i in rule.rhs_amzv.keys())


def test_rule_table_rejects_inhomogeneous():
    with pytest.raises(TableFormatError):
        RuleTable.from_text("z(b4,1) := -29/32 z5 + 1/2 z2*z4\n")
    with pytest.raises(TableFormatError):
        RuleTable.from_text("z(b2) := -1/2 z2\nz(b2) := z2\n")
    with pytest.raises(TableFormatError):
        RuleTable.from_text("z(1,2) := z3\n")


def test_rule_table_text_round_trip():
    rules = default_rule_table()
    again = RuleTable.from_text(rules.to_text())
    assert list(again) == list(rules)
    assert all(again[k].rhs_zeta == rules[k].rhs_zeta and again[k].rhs_amzv == rules[k].rhs_amzv for k in rules)


@pytest.mark.parametrize("text", [
    "z(b4,1) := -29/32 z5 + 1/2 z2*z3",
    "z(b2,1,1) := -1/16 z4 + 1/2 z(b3,1)",
    "z(b8) := -127/128 z8",
])
def test_verify_reduction_examples(text):
    rule = RuleTable.from_text(text + "\n")[parse_index(text.split(":=")[0].strip())]
    assert verify_reduction(rule, 192) < mpf(10) ** -30


@pytest.mark.slow
def test_every_table_rule_verifies():
    rules = default_rule_table()
    for idx in rules:
        assert verify_reduction(rules[idx], 160) < mpf(10) ** -30, str(idx)


def test_zagier_n1():
    assert zagier_check(1, 192) < mpf(10) ** -30
    assert zagier_check(1, 128, N=10 ** 5, method="nested") < mpf(10) ** -4


def test_zagier_n2_against_stuffle():
    assert zagier_check(2, 128, N=10 ** 6) < mpf(10) ** -6
    lhs, _ = amzv_nested_sum(z(-2, 1, -2, 1), 10 ** 6)
    assert close(lhs, zeta33_stuffle(128) / 64, mpf(10) ** -6, 128)
    rhs, _ = amzv_nested_sum(z(3, 3), 10 ** 6)
    assert close(rhs, zeta33_stuffle(128), mpf(10) ** -6, 128)


def test_zagier_lemma_only_n1():
    with pytest.raises(ShapeError):
        zagier_check(2, 128, method="lemma")
