from fractions import Fraction

import pytest
from mpmath import mp, mpf

from zeta_asym.coefficients import closed_value
from zeta_asym.errors import DomainError, IllConditioned, InsufficientPrecision
from zeta_asym.fit import (
    DEFAULT_NS,
    FitConfig,
    extract_coeffs,
    required_bits,
    significant_digits,
    solve_coefficients,
    vandermonde_inverse,
)
from zeta_asym.hp import Precision

from conftest import close


def poly_samples(coefs, ns, bits):
    with mp.workprec(bits + 20):
        return [sum(mpf(c.numerator) / c.denominator / mpf(n) ** j for j, c in enumerate(coefs)) for n in ns]


def test_vandermonde_inverse_is_exact():
    ns = [3, 5, 8, 13]
    inv = vandermonde_inverse(ns)
    for i, n in enumerate(ns):
        for k in range(len(ns)):
            dot = sum(Fraction(1, n) ** j * inv[j][k] for j in range(len(ns)))
            assert dot == (1 if i == k else 0)


def test_synthetic_exact_recovery():
    coefs = [Fraction(3, 4), Fraction(0)] + [Fraction((-1) ** j * (j + 1), 7 * j) for j in range(2, 12)]
    cfg = FitConfig()
    rows = extract_coeffs(cfg, samples=poly_samples(coefs, cfg.sample_ns, cfg.prec.bits))
    assert [r.order for r in rows] == list(range(10))
    with mp.workprec(800):
        for r in rows:
            c = coefs[r.order]
            assert close(r.estimate, mpf(c.numerator) / c.denominator, mpf(2) ** -500, 768)


def test_solve_reports_all_orders():
    ns = [64, 128, 256, 512]
    coefs = [Fraction(1), Fraction(-2), Fraction(3), Fraction(5)]
    out = solve_coefficients(ns, poly_samples(coefs, ns, 256), 256)
    for got, c in zip(out, coefs):
        assert close(got, c.numerator, mpf(2) ** -180, 256)


def test_precision_heuristic():
    assert required_bits(FitConfig()) <= 768
    with pytest.raises(InsufficientPrecision):
        extract_coeffs(FitConfig(prec=Precision(128)), samples=[mpf(1)] * len(DEFAULT_NS))


def test_config_validation():
    with pytest.raises(DomainError):
        FitConfig(sample_ns=(64, 64, 128))
    with pytest.raises(DomainError):
        FitConfig(sample_ns=DEFAULT_NS[:5])
    with pytest.raises(DomainError):
        FitConfig(sample_ns=tuple(16 * 2 ** i for i in range(12)))


def test_ill_conditioned_detected():
    cfg = FitConfig()
    coefs = [Fraction(3, 4)] + [Fraction(0)] * 11 + [Fraction(10 ** 40)]
    with pytest.raises(IllConditioned):
        extract_coeffs(cfg, samples=poly_samples(coefs, cfg.sample_ns, cfg.prec.bits))


def test_significant_digits():
    assert significant_digits(mpf("1.0001"), mpf(1)) == pytest.approx(4, abs=0.01)
    assert significant_digits(mpf(1), mpf(1)) == float("inf")


@pytest.mark.slow
def test_real_fit_within_stability():
    rows = extract_coeffs(FitConfig(), workers=2)
    for r in rows:
        ref = closed_value(r.order, 768)
        with mp.workprec(800):
            assert abs(r.estimate - ref) <= r.stability, r.order
    assert significant_digits(rows[0].estimate, closed_value(0, 768)) > 30
    assert abs(rows[1].estimate) < mpf(10) ** -20
    for j in (2, 3):
        assert significant_digits(rows[j].estimate, closed_value(j, 768)) >= 20, j
