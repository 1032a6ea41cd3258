"""Arbitrary-precision reals, constants and double-exponential quadrature.

mpmath's ``mpf`` is the real type throughout.  Every public function takes
an explicit :class:`Precision`, works internally with ``GUARD_BITS`` extra
bits under ``mpmath.workprec`` and rounds its result back to the requested
precision, so outputs depend only on the arguments.

The global mpmath context is process-wide state; parallel callers should
use processes (see :mod:`zeta_asym.parallel`), not threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, EnvelopeError, NonConvergence

HPReal = mpf
BigRational = Fraction

DEFAULT_BITS = 256
GUARD_BITS = 20
MIN_BITS = 64


@dataclass(frozen=True, order=True)
class Precision:
    """Binary working precision."""

    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if not isinstance(self.bits, int) or isinstance(self.bits, bool):
            raise DomainError(f"precision bits must be an int, got {self.bits!r}")
        if self.bits < MIN_BITS:
            raise DomainError(f"precision must be at least {MIN_BITS} bits, got {self.bits}")

    @property
    def dps(self) -> int:
        return int(self.bits * math.log10(2))

    @property
    def work_bits(self) -> int:
        return self.bits + GUARD_BITS

    def doubled(self) -> "Precision":
        return Precision(2 * self.bits)

    def tolerance(self, slack: int = 16) -> mpf:
        """2^-(bits - slack), the default agreement threshold."""
        return mpf(2) ** (slack - self.bits)

    @classmethod
    def from_digits(cls, digits: int) -> "Precision":
        return cls(max(MIN_BITS, math.ceil(digits / math.log10(2))))


PrecisionLike = Union[Precision, int, None]


def as_precision(prec: PrecisionLike) -> Precision:
    if prec is None:
        return Precision()
    if isinstance(prec, Precision):
        return prec
    return Precision(prec)


def hp(x, prec: PrecisionLike) -> mpf:
    """Convert an int, Fraction, string or mpf to an mpf rounded at ``prec``."""
    prec = as_precision(prec)
    with mp.workprec(prec.bits):
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        return +mpf(x)


def round_to(x: mpf, prec: PrecisionLike) -> mpf:
    with mp.workprec(as_precision(prec).bits):
        return +x


def to_decimal(x: mpf, prec: PrecisionLike) -> str:
    """Decimal string that reads back to ``x`` at ``prec`` within one ulp."""
    prec = as_precision(prec)
    digits = math.ceil(prec.bits * math.log10(2)) + 2
    with mp.workprec(prec.bits):
        return mpmath.nstr(x, digits, strip_zeros=False)


def from_decimal(s: str, prec: PrecisionLike) -> mpf:
    with mp.workprec(as_precision(prec).bits):
        return mpf(s)


def ulp(x: mpf, prec: PrecisionLike) -> mpf:
    prec = as_precision(prec)
    if x == 0:
        return mpf(2) ** (-prec.bits)
    return mpf(2) ** (int(mpmath.floor(mpmath.log(abs(x), 2))) + 1 - prec.bits)


# -- constants ---------------------------------------------------------------

def zeta_value(k: int, prec: PrecisionLike = None) -> mpf:
    """Riemann zeta at an integer k >= 2."""
    if int(k) != k or k < 2:
        raise DomainError(f"zeta_value needs an integer k >= 2, got {k}")
    prec = as_precision(prec)
    return _zeta_cached(int(k), prec.bits)


@lru_cache(maxsize=None)
def _zeta_cached(k: int, bits: int) -> mpf:
    with mp.workprec(bits + GUARD_BITS):
        z = mpmath.zeta(k)
    return round_to(z, bits)


def log2_value(prec: PrecisionLike = None) -> mpf:
    prec = as_precision(prec)
    with mp.workprec(prec.work_bits):
        v = +mp.ln2
    return round_to(v, prec)


def pi_value(prec: PrecisionLike = None) -> mpf:
    prec = as_precision(prec)
    with mp.workprec(prec.work_bits):
        v = +mp.pi
    return round_to(v, prec)


# -- quadrature --------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureResult:
    value: mpf
    error_estimate: mpf
    levels_used: int
    tail_bound: mpf = mpf(0)

    def __post_init__(self):
        if self.error_estimate < 0 or self.tail_bound < 0:
            raise ValueError("error estimates must be non-negative")


DEFAULT_MAX_LEVEL = 14
MIN_LEVEL = 3


@lru_cache(maxsize=None)
def _tanh_sinh_level(work_bits: int, level: int):
    """Abscissa offsets and weights on [-1, 1] for one refinement level.

    Returns (centre_weight, nodes) where nodes are (delta, w) pairs for
    t = k*h > 0 that are new at this level; delta = 1 - tanh(pi/2 sinh t)
    is computed directly so nodes next to an endpoint keep full relative
    accuracy.  centre_weight is only non-zero at level 0.
    """
    with mp.workprec(work_bits):
        # weights decay like exp(-pi sinh t); stop once they are below
        # 2^-(2W), which also covers algebraic endpoint singularities
        t_max = mpmath.asinh(2 * work_bits * mp.ln2 / mp.pi)
        h = mpf(2) ** (-level)
        half_pi = mp.pi / 2
        nodes = []
        if level == 0:
            k, step = 1, 1
        else:
            k, step = 1, 2
        while True:
            t = k * h
            if t > t_max:
                break
            s = half_pi * mpmath.sinh(t)
            ch = mpmath.cosh(s)
            delta = 1 / (mpmath.exp(s) * ch)
            w = half_pi * mpmath.cosh(t) / ch ** 2
            nodes.append((delta, w))
            k += step
        centre = half_pi if level == 0 else mpf(0)
        return centre, tuple(nodes)


def integrate_finite(
    f: Callable[[mpf], mpf],
    a,
    b,
    prec: PrecisionLike = None,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> QuadratureResult:
    """Tanh-sinh quadrature of ``f`` over [a, b].

    The step is halved until two successive levels agree within
    ``2^-(bits-16) * max(1, int|f|)``.  ``f`` is called with mpf arguments
    at the working precision and is never evaluated at the endpoints.
    """
    prec = as_precision(prec)
    W = prec.work_bits
    a = hp(a, W)
    b = hp(b, W)
    with mp.workprec(W):
        if not a < b:
            raise DomainError(f"integrate_finite needs a < b, got [{a}, {b}]")
        half = (b - a) / 2
        tol = prec.tolerance()
        acc = mpf(0)
        acc_abs = mpf(0)
        prev = None
        diff = None
        for level in range(max_level + 1):
            centre_w, nodes = _tanh_sinh_level(W, level)
            if centre_w:
                v = f(a + half)
                acc += centre_w * v
                acc_abs += centre_w * abs(v)
            for delta, w in nodes:
                d = half * delta
                v1 = f(a + d)
                v2 = f(b - d)
                acc += w * (v1 + v2)
                acc_abs += w * (abs(v1) + abs(v2))
            h = mpf(2) ** (-level)
            est = half * h * acc
            if prev is not None:
                diff = abs(est - prev)
                l1 = half * h * acc_abs
                if level >= MIN_LEVEL and diff <= tol * max(1, l1):
                    return QuadratureResult(
                        value=round_to(est, prec),
                        error_estimate=round_to(diff, prec),
                        levels_used=level,
                    )
            prev = est
    raise NonConvergence(
        f"tanh-sinh did not converge on [{mpmath.nstr(a, 8)}, {mpmath.nstr(b, 8)}] "
        f"within {max_level} levels",
        last_estimate=prev,
        last_difference=diff,
    )


@dataclass(frozen=True)
class Envelope:
    """Decay descriptor: |f(u)| <= scale * u^p_max * (1+u)^q_max * exp(-k_min u) for large u."""

    p_max: int
    q_max: int
    k_min: Union[int, Fraction]
    scale: Union[int, Fraction] = 1

    def tail_bound(self, A, prec: PrecisionLike = None) -> mpf:
        """Upper bound for the envelope integral over [A, oo); inf if the bound does not apply."""
        prec = as_precision(prec)
        with mp.workprec(prec.work_bits):
            A = mpf(A)
            m = max(self.p_max, 0) + max(self.q_max, 0)
            k = mpf(Fraction(self.k_min).numerator) / Fraction(self.k_min).denominator
            scale = abs(mpf(Fraction(self.scale).numerator) / Fraction(self.scale).denominator)
            # (1+u)^m e^{-ku} has log-derivative <= m/(1+A) - k on [A, oo)
            kappa = k - mpf(m) / (1 + A)
            if kappa <= 0:
                return mpmath.inf
            bound = scale * (1 + A) ** m * mpmath.exp(-k * A) / kappa
        return round_to(bound, prec)


SPLIT_START = 64
SPLIT_LIMIT = 2 ** 20


def choose_split(envelope: Envelope, prec: PrecisionLike = None):
    """Smallest A in 64 * 2^j whose analytic tail bound is below 2^-(bits+8)."""
    prec = as_precision(prec)
    if envelope.k_min < 1:
        raise DomainError(f"envelope decay rate must be >= 1, got {envelope.k_min}")
    target = mpf(2) ** (-(prec.bits + 8))
    A = SPLIT_START
    while A <= SPLIT_LIMIT:
        bound = envelope.tail_bound(A, prec)
        if bound < target:
            return A, bound
        A *= 2
    raise EnvelopeError(f"no split point A <= 2^20 makes the tail bound of {envelope} small enough")


def integrate_semi_infinite(
    f: Callable[[mpf], mpf],
    envelope: Envelope,
    prec: PrecisionLike = None,
    *,
    max_level: int = DEFAULT_MAX_LEVEL,
) -> QuadratureResult:
    """Integral of ``f`` over [0, oo) as a finite quadrature on [0, A] plus an analytic tail bound.

    [0, A] is cut at 1, 2, 4, ... so each piece stays short relative to the
    distance of the integrand's complex singularities from the real axis.
    """
    prec = as_precision(prec)
    A, bound = choose_split(envelope, prec)
    cuts = [0, 1]
    while cuts[-1] < A:
        cuts.append(cuts[-1] * 2)
    total = mpf(0)
    err = mpf(0)
    levels = 0
    with mp.workprec(prec.work_bits):
        for lo, hi in zip(cuts, cuts[1:]):
            piece = integrate_finite(f, lo, hi, Precision(prec.bits + 4), max_level=max_level)
            total += piece.value
            err += piece.error_estimate
            levels = max(levels, piece.levels_used)
    return QuadratureResult(
        value=round_to(total, prec),
        error_estimate=round_to(err, prec),
        levels_used=levels,
        tail_bound=bound,
    )
