"""Tables of the expansion coefficients I_0..I_9 and reduction of AMZV forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence

from mpmath import mp, mpf

from . import textfmt
from .errors import DomainError, OutOfRange, ResidualAmzv, TableFormatError
from .hp import PrecisionLike, as_precision, round_to
from .mzv import (
    AmzvCombination,
    AmzvIndex,
    ZetaPolynomial,
    amzv_numeric,
    default_rule_table,
)

CONJECTURE_ONE_A = (Fraction(-2), Fraction(1), Fraction(-2), Fraction(17, 2), Fraction(-62))


@dataclass(frozen=True)
class CoefficientTable:
    closed: Dict[int, ZetaPolynomial]
    amzv: Dict[int, AmzvCombination]

    def __post_init__(self):
        for j, poly in self.closed.items():
            bad = [w for w in poly.weights() if w != j]
            if bad:
                raise TableFormatError(f"closed form of I{j} has terms of weight {bad}")
        for j, comb in self.amzv.items():
            bad = [w for w in comb.weights() if w != j]
            if bad:
                raise TableFormatError(f"AMZV form of I{j} has terms of weight {bad}")

    @classmethod
    def from_text(cls, text: str) -> "CoefficientTable":
        closed, amzv = {}, {}
        for line in textfmt.iter_data_lines(text):
            kind, _, name = line.key.partition(".")
            try:
                if not name.startswith("I"):
                    raise ValueError(f"unknown key {line.key!r}")
                j = int(name[1:])
                if kind == "closed":
                    closed[j] = ZetaPolynomial.parse(line.rhs).scale(line.scale)
                elif kind == "amzv":
                    amzv[j] = AmzvCombination.parse(line.rhs).scale(line.scale)
                else:
                    raise ValueError(f"unknown key {line.key!r}")
            except ValueError as exc:
                raise TableFormatError(str(exc), line.line_no, line.raw) from None
        return cls(closed, amzv)


@lru_cache(maxsize=1)
def coefficient_table() -> CoefficientTable:
    return CoefficientTable.from_text(textfmt.data_path("coefficients.txt").read_text(encoding="utf-8"))


def closed_form(j: int) -> ZetaPolynomial:
    table = coefficient_table().closed
    if j not in table:
        raise OutOfRange(f"no closed form for I{j}; available 0..{max(table)}")
    return table[j]


def amzv_form(j: int) -> AmzvCombination:
    table = coefficient_table().amzv
    if j not in table:
        raise OutOfRange(f"no AMZV form for I{j}; available {min(table)}..{max(table)}")
    return table[j]


def reduce_to_zeta(c: AmzvCombination, rules: Optional[Mapping] = None,
                   max_rounds: Optional[int] = None) -> ZetaPolynomial:
    """Rewrite with the reduction rules until no AMZV is left.

    Each round replaces every index that has a rule, heaviest and deepest
    first; rules may reintroduce simpler AMZVs which later rounds or
    cancellation remove.  The number of rounds is capped (by default at
    one more than the table size) so a cyclic table cannot loop forever.
    Leftover indices raise :class:`ResidualAmzv`.
    """
    rules = default_rule_table() if rules is None else rules
    cap = max_rounds if max_rounds is not None else len(rules) + 1
    zeta = ZetaPolynomial()
    rest = c
    for _ in range(cap):
        todo = [idx for idx in sorted(rest.keys(), reverse=True) if idx in rules]
        if not todo:
            break
        for idx in todo:
            coef = rest.coefficient(idx)
            if not coef:
                continue
            rule = rules[idx]
            zeta = zeta + rule.rhs_zeta.scale(coef)
            rest = rest - AmzvCombination({idx: coef}) + rule.rhs_amzv.scale(coef)
    if rest:
        raise ResidualAmzv(rest.terms)
    return zeta


def conjecture1_combo(m: int, a: Sequence = CONJECTURE_ONE_A) -> AmzvCombination:
    """(1/8) sum_{j=2}^m (-1)^m a_floor((j-1)/2) zeta(j-bar, {1}_(m-j))."""
    if not 2 <= m <= 11:
        raise DomainError(f"order must lie in [2, 11], got {m}")
    need = (m - 1) // 2
    if len(a) <= need:
        raise OutOfRange(f"order {m} needs a_{need} but only {len(a)} values were given")
    sign = (-1) ** m
    items = {}
    for j in range(2, m + 1):
        items[AmzvIndex.bar_ones(j, m - j)] = Fraction(sign) * Fraction(a[(j - 1) // 2]) / 8
    return AmzvCombination(items)


def closed_value(j: int, prec: PrecisionLike = None) -> mpf:
    return closed_form(j).evaluate(prec)


def amzv_value(c: AmzvCombination, prec: PrecisionLike = None, rules: Optional[Mapping] = None):
    """Numeric value of an AMZV combination; returns (value, provenance per index)."""
    prec = as_precision(prec)
    provenance = {}
    with mp.workprec(prec.work_bits):
        total = mpf(0)
        for coef, idx in c.terms:
            v, how = amzv_numeric(idx, prec.work_bits, rules)
            provenance[str(idx)] = how
            total += mpf(coef.numerator) / coef.denominator * v
    return round_to(total, prec), provenance
