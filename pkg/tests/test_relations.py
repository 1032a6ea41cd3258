import itertools
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from zeta_asym.coefficients import closed_form, reduce_to_zeta, amzv_form
from zeta_asym.errors import ConjectureMismatch, DomainError, InsufficientPrecision
from zeta_asym.hp import Precision, zeta_value
from zeta_asym.mzv import ZetaMonomial, ZetaPolynomial
from zeta_asym.relations import (
    VERIFY_SHRINK,
    amzv_path_value,
    conjecture1_crosscheck,
    conjecture2_test,
    even_zeta_ratio,
    find_integer_relation,
    from_zeta2_basis,
    to_zeta2_basis,
    zeta_monomial_basis,
)

SIXTY = Precision.from_digits(60)


def brute_force_basis(w):
    """Multisets over {2} and the odd numbers >= 3 with total w, as ZetaMonomials."""
    parts = [2] + list(range(3, w + 1, 2))
    out = set()
    for size in range(1, w // 2 + 1):
        for combo in itertools.combinations_with_replacement(parts, size):
            if sum(combo) == w:
                counts = {}
                for p in combo:
                    counts[p] = counts.get(p, 0) + 1
                out.add(ZetaMonomial(tuple(sorted(counts.items()))))
    return out


def test_golden_ratio():
    def xs(prec):
        with mp.workprec(prec.work_bits):
            phi = (1 + mpmath.sqrt(5)) / 2
            return [phi ** 2, phi, mpf(1)]

    assert find_integer_relation(xs, SIXTY).coefficients == (1, -1, -1)


def test_zeta2_pi():
    def xs(prec):
        with mp.workprec(prec.work_bits):
            return [zeta_value(2, prec), mpmath.pi ** 2]

    assert find_integer_relation(xs, SIXTY).coefficients == (6, -1)


def test_plain_values_search_at_half_precision():
    bits = 400
    with mp.workprec(bits):
        xs = [zeta_value(2, bits), mpmath.pi ** 2]
    r = find_integer_relation(xs, bits)
    assert r.coefficients == (6, -1)
    assert r.verify_residual <= max(r.residual * VERIFY_SHRINK, mpf(2) ** (40 - bits))


def test_i6_relation_from_reduction():
    def xs(prec):
        i6 = reduce_to_zeta(amzv_form(6)).evaluate(prec)
        return [i6, zeta_value(6, prec), ZetaMonomial.of(3, 3).evaluate(prec)]

    assert find_integer_relation(xs, SIXTY).coefficients == (256, -83, 16)


def test_i6_relation_blind():
    def xs(prec):
        return [amzv_path_value(6, prec), zeta_value(6, prec), ZetaMonomial.of(3, 3).evaluate(prec)]

    assert find_integer_relation(xs, SIXTY).coefficients == (256, -83, 16)


def test_no_relation():
    def xs(prec):
        with mp.workprec(prec.work_bits):
            return [mpmath.pi, mpmath.e, mpmath.log(3)]

    assert find_integer_relation(xs, 256, max_norm=1000) is None


def test_precision_precondition():
    with pytest.raises(InsufficientPrecision):
        find_integer_relation([mpf(1), mpf(2), mpf(3), mpf(5)], 64)
    with pytest.raises(DomainError):
        find_integer_relation([mpf(1)], 256)


def test_even_zeta_ratio():
    assert even_zeta_ratio(1) == 1
    assert even_zeta_ratio(2) == Fraction(2, 5)
    assert even_zeta_ratio(3) == Fraction(8, 35)
    bits = 256
    with mp.workprec(bits + 20):
        for k in range(1, 7):
            r = even_zeta_ratio(k)
            diff = zeta_value(2 * k, bits) - mpf(r.numerator) / r.denominator * zeta_value(2, bits) ** k
            assert abs(diff) < mpf(2) ** (16 - bits)


def test_basis_examples():
    assert set(zeta_monomial_basis(5).monomials) == {ZetaMonomial.of(5), ZetaMonomial.of(2, 3)}
    assert set(zeta_monomial_basis(6).monomials) == {ZetaMonomial.of(2, 2, 2), ZetaMonomial.of(3, 3)}
    nine = {ZetaMonomial.of(9), ZetaMonomial.of(3, 3, 3), ZetaMonomial.of(2, 2, 2, 3),
            ZetaMonomial.of(2, 2, 5), ZetaMonomial.of(2, 7)}
    assert set(zeta_monomial_basis(9).monomials) == nine


@pytest.mark.parametrize("w", range(2, 13))
def test_basis_matches_brute_force(w):
    assert set(zeta_monomial_basis(w).monomials) == brute_force_basis(w)


def test_basis_domain():
    with pytest.raises(DomainError):
        zeta_monomial_basis(13)


@pytest.mark.parametrize("j", range(2, 10))
def test_zeta2_basis_round_trip(j):
    poly = closed_form(j)
    assert from_zeta2_basis(to_zeta2_basis(poly)) == poly


def test_conjecture2_low_orders():
    assert conjecture2_test(4, 256) == to_zeta2_basis(ZetaPolynomial.parse("-3/32 z4"))
    seven = ZetaPolynomial.parse("3/2 z7 + 27/8 z3*z4 + 3/2 z2*z5").scale(Fraction(1, 8))
    assert conjecture2_test(7, 256) == to_zeta2_basis(seven)


def test_conjecture2_detects_mismatch():
    def wrong(j, prec):
        with mp.workprec(prec.work_bits):
            return closed_form(j).evaluate(prec) + zeta_value(4, prec) / 1000

    with pytest.raises(ConjectureMismatch):
        conjecture2_test(4, 256, value_provider=wrong)


@pytest.mark.parametrize("m", [2, 8, 9])
def test_conjecture1_crosscheck(m):
    assert conjecture1_crosscheck(m, 192) < mpf(10) ** -30
