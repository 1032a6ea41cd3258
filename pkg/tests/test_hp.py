import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from zeta_asym.errors import DomainError, EnvelopeError, NonConvergence
from zeta_asym.hp import (
    Envelope,
    Precision,
    choose_split,
    from_decimal,
    integrate_finite,
    integrate_semi_infinite,
    log2_value,
    to_decimal,
    zeta_value,
)

from conftest import close


def euler_maclaurin_zeta(s: int, digits: int = 64, N: int = 60, terms: int = 30) -> mpf:
    """zeta(s) = sum_{k<N} k^-s + N^(1-s)/(s-1) + N^-s/2 + Bernoulli corrections."""
    with mp.workdps(digits + 20):
        total = mpf(0)
        for k in range(1, N):
            total += mpf(k) ** -s
        total += mpf(N) ** (1 - s) / (s - 1) + mpf(N) ** -s / 2
        for j in range(1, terms + 1):
            b = mpmath.bernfrac(2 * j)
            rising = 1
            for i in range(2 * j - 1):
                rising *= s + i
            total += mpf(b[0]) / b[1] / math.factorial(2 * j) * rising * mpf(N) ** (-s - 2 * j + 1)
        return total


def test_precision_validation():
    with pytest.raises(DomainError):
        Precision(32)
    with pytest.raises(DomainError):
        Precision(100.0)
    assert Precision(100).doubled().bits == 200
    assert Precision.from_digits(60).bits >= 200


def test_decimal_round_trip():
    with mp.workprec(256):
        x = mpmath.pi / 7
    y = from_decimal(to_decimal(x, 256), 256)
    assert close(x, y, mpf(2) ** -250)


@pytest.mark.parametrize("f,a,b,exact", [
    (lambda x: x, 0, 1, Fraction(1, 2)),
    (lambda x: 2 * (1 - x), 0, Fraction(1, 2), Fraction(3, 4)),
])
def test_integrate_finite_rational(f, a, b, exact):
    r = integrate_finite(f, a, b, 192)
    assert close(r.value, mpf(exact.numerator) / exact.denominator, mpf(2) ** -180, 192)


def test_integrate_finite_exp():
    r = integrate_finite(mpmath.exp, 0, 1, 256)
    with mp.workprec(300):
        assert close(r.value, mpmath.e - 1, mpf(2) ** -240)


@pytest.mark.parametrize("deg", range(9))
def test_integrate_finite_polynomials(deg):
    coefs = [Fraction((-1) ** i * (i + 2), i + 1) for i in range(deg + 1)]
    exact = sum(c * Fraction(3 ** (i + 1) - (-1) ** (i + 1), i + 1) for i, c in enumerate(coefs))

    def f(x):
        return sum(mpf(c.numerator) / c.denominator * x ** i for i, c in enumerate(coefs))

    r = integrate_finite(f, -1, 3, 128)
    with mp.workprec(160):
        assert abs(r.value - mpf(exact.numerator) / exact.denominator) <= 4 * mpf(2) ** -128 * max(1, abs(r.value))


def test_integrate_finite_log_endpoint():
    r = integrate_finite(mpmath.log, 0, 1, 128)
    assert close(r.value, -1, mpf(2) ** -110, 128)


def test_integrate_finite_errors():
    with pytest.raises(DomainError):
        integrate_finite(lambda x: x, 1, 0, 128)
    with pytest.raises(NonConvergence):
        integrate_finite(lambda x: mpmath.sin(1000 * x), 0, 10, 128, max_level=4)


def test_integrate_semi_infinite_examples():
    r = integrate_semi_infinite(lambda u: mpmath.exp(-u), Envelope(0, 0, 1), 192)
    assert close(r.value, 1, mpf(2) ** -170, 192)
    r = integrate_semi_infinite(lambda u: u * mpmath.exp(-u), Envelope(1, 0, 1), 192)
    assert close(r.value, 1, mpf(2) ** -170, 192)
    r = integrate_semi_infinite(lambda u: mpmath.log1p(mpmath.exp(-u)), Envelope(0, 0, 1), 192)
    with mp.workprec(220):
        assert close(r.value, mpmath.pi ** 2 / 12, mpf(2) ** -170, 192)
    assert r.tail_bound < mpf(2) ** -192


def test_split_independence():
    env = Envelope(2, 0, 1)
    f = lambda u: u * u * mpmath.exp(-u)  # noqa: E731
    r = integrate_semi_infinite(f, env, 128)
    A, _ = choose_split(env, 128)
    larger = integrate_finite(f, 0, 2 * A, 128)
    assert close(r.value + r.tail_bound, larger.value + env.tail_bound(2 * A, 128),
                 r.error_estimate + larger.error_estimate + mpf(2) ** -120, 128)


def test_envelope_errors():
    with pytest.raises(DomainError):
        choose_split(Envelope(0, 0, Fraction(1, 2)), 128)
    with pytest.raises(EnvelopeError):
        choose_split(Envelope(0, 2 ** 21, 1), 128)


def test_zeta_examples():
    with mp.workprec(300):
        assert close(zeta_value(2, 256), mpmath.pi ** 2 / 6, mpf(2) ** -250)
        assert close(zeta_value(4, 256), mpmath.pi ** 4 / 90, mpf(2) ** -250)
    with pytest.raises(DomainError):
        zeta_value(1)


def test_zeta3_against_euler_maclaurin():
    oracle = euler_maclaurin_zeta(3, 64)
    assert mpmath.nstr(oracle, 15).startswith("1.20205690315959")
    assert close(zeta_value(3, 256), oracle, mpf(10) ** -64)


def test_log2():
    assert mpmath.nstr(log2_value(64), 15) == "0.693147180559945"
    assert close(log2_value(256), log2_value(128), mpf(2) ** -127)
    with mp.workprec(256):
        assert abs(mpmath.exp(log2_value(256)) - 2) <= 8 * mpf(2) ** -255


def test_determinism():
    a = integrate_finite(lambda x: mpmath.sqrt(x) * mpmath.log(x), 0, 1, 160)
    b = integrate_finite(lambda x: mpmath.sqrt(x) * mpmath.log(x), 0, 1, 160)
    assert a == b
    with mp.workprec(180):
        assert close(a.value, mpf(-4) / 9, mpf(2) ** -140, 160)


def test_doubling_keeps_digits():
    f = lambda u: mpmath.log1p(mpmath.exp(-u)) ** 2  # noqa: E731
    lo = integrate_semi_infinite(f, Envelope(0, 0, 2), 128)
    hi = integrate_semi_infinite(f, Envelope(0, 0, 2), 256)
    assert close(lo.value, hi.value, lo.error_estimate + lo.tail_bound + mpf(2) ** -120, 256)
