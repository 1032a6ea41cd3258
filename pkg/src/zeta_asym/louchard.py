"""Direct evaluation of I(n) = int_0^1 (x^n + (1-x)^n)^(1/n) dx and its asymptotic partial sums."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp, mpf

from .coefficients import closed_form
from .errors import DomainError
from .hp import Precision, PrecisionLike, as_precision, integrate_finite, round_to
from .parallel import parallel_map

SPLIT_C = 10


@dataclass(frozen=True)
class IntegralSample:
    n: int
    value: mpf
    prec: Precision
    error_estimate: mpf = mpf(0)


def _symmetric_integrand(n: int):
    # 2 (1-x) [1 + (x/(1-x))^n]^(1/n), bracket in the log domain
    def f(x):
        t = n * (mpmath.log(x) - mpmath.log1p(-x))
        return 2 * (1 - x) * mpmath.exp(mpmath.log1p(mpmath.exp(t)) / n)

    return f


def split_point(n: int) -> Fraction:
    """Cut [0, 1/2] where the integrand turns, about 10/n below the midpoint."""
    c = Fraction(1, 2) - Fraction(SPLIT_C, n)
    return c if c > Fraction(1, 4) else Fraction(1, 4)


def I_direct_sample(n: int, prec: PrecisionLike = None) -> IntegralSample:
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    prec = as_precision(prec)
    f = _symmetric_integrand(n)
    c = split_point(n)
    inner = Precision(prec.bits + 4)
    left = integrate_finite(f, 0, c, inner)
    right = integrate_finite(f, c, Fraction(1, 2), inner)
    with mp.workprec(prec.work_bits):
        value = left.value + right.value
        err = left.error_estimate + right.error_estimate
    return IntegralSample(n, round_to(value, prec), prec, round_to(err, prec))


def I_direct(n: int, prec: PrecisionLike = None) -> mpf:
    """I(n) from the symmetric form 2 int_0^(1/2) (1-x) [1 + (x/(1-x))^n]^(1/n) dx."""
    return I_direct_sample(n, prec).value


def I_direct_unsymmetrized(n: int, prec: PrecisionLike = None) -> mpf:
    """I(n) straight from the definition on [0, 1]; meant for moderate n only."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    n = int(n)
    prec = as_precision(prec)

    def f(x):
        return (x ** n + (1 - x) ** n) ** (mpf(1) / n)

    d = min(Fraction(SPLIT_C, n), Fraction(1, 4))
    cuts = [Fraction(0), Fraction(1, 2) - d, Fraction(1, 2), Fraction(1, 2) + d, Fraction(1)]
    inner = Precision(prec.bits + 4)
    with mp.workprec(prec.work_bits):
        total = mpf(0)
        for a, b in zip(cuts, cuts[1:]):
            total += integrate_finite(f, a, b, inner).value
    return round_to(total, prec)


def I_direct_many(ns: Sequence[int], prec: PrecisionLike = None, workers: Optional[int] = 1) -> List[IntegralSample]:
    return parallel_map(partial(I_direct_sample, prec=as_precision(prec)), list(ns), workers)


def asymptotic_partial_sum(n: int, M: int, prec: PrecisionLike = None) -> mpf:
    """3/4 + sum_{j=2}^M I_j / n^j."""
    if not 2 <= M <= 9:
        raise DomainError(f"M must lie in [2, 9], got {M}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    prec = as_precision(prec)
    with mp.workprec(prec.work_bits):
        total = mpf(3) / 4
        inv = mpf(1) / n
        for j in range(2, M + 1):
            total += closed_form(j).evaluate(prec.work_bits) * inv ** j
    return round_to(total, prec)


def remainder_diagnostic(n_list: Sequence[int], M: int, prec: PrecisionLike = None,
                         workers: Optional[int] = 1) -> List[Tuple[int, mpf, mpf]]:
    """(n, I(n) - partial sum, remainder * n^(M+1)) for each n."""
    if any(n < 20 for n in n_list):
        raise DomainError("remainder diagnostics need n >= 20")
    if M > 9:
        raise DomainError(f"M must be <= 9, got {M}")
    prec = as_precision(prec)
    samples = I_direct_many(n_list, prec, workers)
    out = []
    with mp.workprec(prec.work_bits):
        for s in samples:
            rem = s.value - asymptotic_partial_sum(s.n, M, prec.work_bits)
            out.append((s.n, round_to(rem, prec), round_to(rem * mpf(s.n) ** (M + 1), prec)))
    return out
