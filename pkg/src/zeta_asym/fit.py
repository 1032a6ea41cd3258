"""Blind extraction of expansion coefficients from high-precision samples of I(n).

With samples at n_1 < ... < n_K the model sum_{j<K} c_j n^-j is solved
exactly: the Vandermonde matrix in x = 1/n is inverted over the rationals,
so the only numeric error comes from the samples themselves and from the
orders >= K that the model leaves out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

from mpmath import mp, mpf

from .errors import DomainError, IllConditioned, InsufficientPrecision
from .hp import Precision, PrecisionLike, as_precision, round_to
from .louchard import I_direct_many

DEFAULT_NS = tuple(64 * 2 ** i for i in range(12))
DEFAULT_FIT_BITS = 768
STABILITY_RATIO = Fraction(1, 1000)
# below this absolute level a drift is sample noise, not ill conditioning;
# it keeps a coefficient that vanishes (I_1) from tripping the ratio test
STABILITY_FLOOR = Fraction(1, 10 ** 20)


@dataclass(frozen=True)
class FitConfig:
    sample_ns: Sequence[int] = DEFAULT_NS
    max_order: int = 9
    prec: Precision = field(default_factory=lambda: Precision(DEFAULT_FIT_BITS))

    def __post_init__(self):
        ns = tuple(int(n) for n in self.sample_ns)
        object.__setattr__(self, "sample_ns", ns)
        object.__setattr__(self, "prec", as_precision(self.prec))
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise DomainError("sample_ns must be strictly increasing")
        if len(ns) < self.max_order + 2:
            raise DomainError(f"need at least max_order + 2 = {self.max_order + 2} samples, got {len(ns)}")
        if ns[0] < 32:
            raise DomainError(f"smallest sample n must be >= 32, got {ns[0]}")
        if self.max_order < 0:
            raise DomainError("max_order must be >= 0")


@dataclass(frozen=True)
class FitRow:
    order: int
    estimate: mpf
    stability: mpf


def vandermonde_inverse(ns: Sequence[int]) -> List[List[Fraction]]:
    """Exact inverse of V[i][j] = n_i^-j, by Gauss-Jordan over the rationals."""
    K = len(ns)
    aug = [[Fraction(1, n) ** j for j in range(K)] + [Fraction(int(i == r)) for i in range(K)]
           for r, n in enumerate(ns)]
    for col in range(K):
        piv = next((r for r in range(col, K) if aug[r][col] != 0), None)
        if piv is None:
            raise IllConditioned("singular sample matrix (repeated n?)")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(K):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [row[K:] for row in aug]


def condition_bits(ns: Sequence[int]) -> float:
    """log2 of ||V||_inf * ||V^-1||_inf for the sample matrix."""
    inv = vandermonde_inverse(ns)
    norm_v = max(sum(Fraction(1, n) ** j for j in range(len(ns))) for n in ns)
    norm_inv = max(sum(abs(v) for v in row) for row in inv)
    return math.log2(norm_v * norm_inv)


def required_bits(cfg: FitConfig) -> int:
    return math.ceil(64 + 10 * cfg.max_order + condition_bits(cfg.sample_ns))


def solve_coefficients(ns: Sequence[int], values: Sequence[mpf], prec: PrecisionLike) -> List[mpf]:
    """c_0..c_{K-1} with sum_j c_j n_i^-j = values[i] exactly."""
    prec = as_precision(prec)
    inv = vandermonde_inverse(ns)
    out = []
    with mp.workprec(prec.work_bits):
        for row in inv:
            acc = mpf(0)
            for coef, v in zip(row, values):
                acc += mpf(coef.numerator) / coef.denominator * v
            out.append(round_to(acc, prec))
    return out


def extract_coeffs(cfg: FitConfig, samples: Optional[Sequence[mpf]] = None,
                   sampler: Optional[Callable] = None, workers: Optional[int] = 1) -> List[FitRow]:
    """Estimates of I_0..I_M with their drop-the-smallest-n stability.

    ``samples`` supplies I(n) values directly (for synthetic tests);
    otherwise ``sampler(ns, prec, workers)`` is called, defaulting to the
    direct quadrature.
    """
    need = required_bits(cfg)
    if cfg.prec.bits < need:
        raise InsufficientPrecision(
            f"fit over {len(cfg.sample_ns)} samples needs about {need} bits, got {cfg.prec.bits}"
        )
    if samples is None:
        sampler = sampler or (lambda ns, prec, w: [s.value for s in I_direct_many(ns, prec, w)])
        samples = sampler(cfg.sample_ns, cfg.prec, workers)
    if len(samples) != len(cfg.sample_ns):
        raise DomainError("one sample per n is required")
    full = solve_coefficients(cfg.sample_ns, samples, cfg.prec)
    reduced = solve_coefficients(cfg.sample_ns[1:], samples[1:], cfg.prec)
    rows = []
    with mp.workprec(cfg.prec.work_bits):
        ratio = mpf(STABILITY_RATIO.numerator) / STABILITY_RATIO.denominator
        floor = mpf(STABILITY_FLOOR.numerator) / STABILITY_FLOOR.denominator
        for j in range(cfg.max_order + 1):
            stab = abs(full[j] - reduced[j])
            if j <= cfg.max_order - 2 and stab > ratio * abs(full[j]) and stab > floor:
                raise IllConditioned(f"order {j}: estimate moves by {stab} when the smallest n is dropped")
            rows.append(FitRow(j, full[j], round_to(stab, cfg.prec)))
    return rows


def significant_digits(estimate: mpf, reference: mpf, bits: int = 2048) -> float:
    """-log10 of the relative error (inf when they agree exactly)."""
    with mp.workprec(bits):
        if reference == 0:
            err = abs(estimate)
            return math.inf if err == 0 else -float(mp.log10(err))
        rel = abs(estimate - reference) / abs(reference)
        return math.inf if rel == 0 else -float(mp.log10(rel))
