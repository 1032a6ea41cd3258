"""Alternating multiple zeta values.

An index is a tuple of (exponent, barred) parts; a barred part carries the
sign (-1)^n of its summation variable::

    zeta(s_1,...,s_k) = sum_{n_1 > ... > n_k >= 1} prod_i sign_i^{n_i} / n_i^{s_i}

Two numeric evaluators are provided.  The production path turns indices of
shape (m-bar, 1, ..., 1) into one-dimensional integrals of powers of
u and log(1+e^-u); the nested-sum path sums the defining series directly
and is kept as a low-precision oracle.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import mpmath
import numpy as np
from mpmath import mp, mpf

from . import textfmt
from .errors import (
    DivergentIndex,
    DomainError,
    PathDisagreement,
    ShapeError,
    TableFormatError,
)
from .hp import (
    Envelope,
    PrecisionLike,
    as_precision,
    hp,
    integrate_semi_infinite,
    log2_value,
    round_to,
    zeta_value,
)

_OVERLINE = "̅"
_SUPERSCRIPTS = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


# ---------------------------------------------------------------------------
# indices and monomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AmzvIndex:
    parts: Tuple[Tuple[int, bool], ...]

    def __post_init__(self):
        parts = tuple((int(e), bool(b)) for e, b in self.parts)
        if not parts:
            raise DomainError("an AMZV index needs at least one part")
        if any(e < 1 for e, _ in parts):
            raise DomainError(f"AMZV exponents must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *entries: int) -> "AmzvIndex":
        """Build from signed ints; a negative entry is a barred exponent."""
        return cls(tuple((abs(e), e < 0) for e in entries))

    @classmethod
    def bar_ones(cls, m: int, k: int) -> "AmzvIndex":
        """The index (m-bar, {1}_k)."""
        return cls(((m, True),) + ((1, False),) * k)

    @classmethod
    def parse(cls, text: str) -> "AmzvIndex":
        return parse_index(text)

    @property
    def weight(self) -> int:
        return sum(e for e, _ in self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    @property
    def converges(self) -> bool:
        return amzv_converges(self)

    def bar_ones_shape(self) -> Optional[Tuple[int, int]]:
        """(m, k) when the index is (m-bar, {1}_k), else None."""
        (m, barred), rest = self.parts[0], self.parts[1:]
        if barred and all(p == (1, False) for p in rest):
            return m, len(rest)
        return None

    def sort_key(self):
        return (self.weight, self.depth, tuple((-e, not b) for e, b in self.parts))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        out = []
        i = 0
        while i < len(self.parts):
            j = i
            while j < len(self.parts) and self.parts[j] == self.parts[i]:
                j += 1
            e, b = self.parts[i]
            tok = ("b" if b else "") + str(e)
            out.append(f"{tok}^{j - i}" if j - i >= 4 else ",".join([tok] * (j - i)))
            i = j
        return "z(" + ",".join(out) + ")"

    def pretty(self) -> str:
        parts = []
        i = 0
        while i < len(self.parts):
            e, b = self.parts[i]
            j = i
            while j < len(self.parts) and self.parts[j] == (e, b):
                j += 1
            run = j - i
            label = "".join(ch + _OVERLINE for ch in str(e)) if b else str(e)
            if run >= 4:
                parts.append("{" + label + "}_" + str(run))
            else:
                parts.extend([label] * run)
            i = j
        return "ζ(" + ",".join(parts) + ")"


_INDEX_RE = re.compile(r"^z\(([^()]*)\)$")
_PART_RE = re.compile(r"^(b?)(\d+)(?:\^(\d+))?$")


def parse_index(text: str) -> AmzvIndex:
    m = _INDEX_RE.match(text.strip())
    if not m:
        raise ValueError(f"not an AMZV index: {text!r}")
    parts = []
    for tok in m.group(1).split(","):
        pm = _PART_RE.match(tok.strip())
        if not pm:
            raise ValueError(f"bad index part {tok!r} in {text!r}")
        reps = int(pm.group(3)) if pm.group(3) else 1
        parts.extend([(int(pm.group(2)), pm.group(1) == "b")] * reps)
    return AmzvIndex(tuple(parts))


def amzv_converges(idx: AmzvIndex) -> bool:
    return idx.parts[0] != (1, False)


@dataclass(frozen=True)
class ZetaMonomial:
    """Product of ordinary zeta values, stored as sorted (k, exponent) pairs."""

    exps: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: Dict[int, int] = {}
        for k, e in self.exps:
            if k < 2:
                raise DomainError(f"zeta({k}) is not an admissible monomial factor")
            merged[int(k)] = merged.get(int(k), 0) + int(e)
        exps = tuple(sorted((k, e) for k, e in merged.items() if e))
        if any(e < 0 for _, e in exps):
            raise DomainError("negative exponent in zeta monomial")
        object.__setattr__(self, "exps", exps)

    @classmethod
    def of(cls, *ks: int) -> "ZetaMonomial":
        """ZetaMonomial.of(3, 3) is zeta(3)^2."""
        return cls(tuple((k, 1) for k in ks))

    @property
    def weight(self) -> int:
        return sum(k * e for k, e in self.exps)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.exps)

    def __mul__(self, other: "ZetaMonomial") -> "ZetaMonomial":
        return ZetaMonomial(self.exps + other.exps)

    def sort_key(self):
        # heaviest single factor first, as in zeta(9) before zeta(3)zeta(6)
        return (self.weight, tuple(-k for k, e in reversed(self.exps) for _ in range(e)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        if not self.exps:
            return "1"
        return "*".join(f"z{k}" + (f"^{e}" if e > 1 else "") for k, e in self.exps)

    def pretty(self) -> str:
        if not self.exps:
            return "1"
        return "".join(f"ζ({k})" + (str(e).translate(_SUPERSCRIPTS) if e > 1 else "") for k, e in self.exps)

    def evaluate(self, prec: PrecisionLike = None) -> mpf:
        prec = as_precision(prec)
        with mp.workprec(prec.work_bits):
            v = mpf(1)
            for k, e in self.exps:
                v *= zeta_value(k, prec.work_bits) ** e
        return round_to(v, prec)


_MONO_FACTOR = re.compile(r"^z(\d+)(?:\^(\d+))?$")


def parse_monomial(text: str) -> ZetaMonomial:
    text = text.strip()
    if text in ("", "1"):
        return ZetaMonomial()
    exps = []
    for tok in text.split("*"):
        m = _MONO_FACTOR.match(tok.strip())
        if not m:
            raise ValueError(f"bad zeta monomial factor {tok!r} in {text!r}")
        exps.append((int(m.group(1)), int(m.group(2) or 1)))
    return ZetaMonomial(tuple(exps))


# ---------------------------------------------------------------------------
# exact linear combinations
# ---------------------------------------------------------------------------

class _Combination:
    """Immutable sparse rational combination keyed by hashable symbols."""

    __slots__ = ("_terms",)
    _key_type: type = object

    def __init__(self, terms: Union[Mapping, Iterable, None] = None):
        acc: Dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for key, coef in items:
                if not isinstance(key, self._key_type):
                    # accept (coef, key) ordering as well
                    key, coef = coef, key
                self._check_key(key)
                acc[key] = acc.get(key, Fraction(0)) + Fraction(coef)
        self._terms = {k: v for k, v in acc.items() if v != 0}

    def _check_key(self, key):
        if not isinstance(key, self._key_type):
            raise TypeError(f"{type(self).__name__} keys must be {self._key_type.__name__}, got {key!r}")

    @property
    def terms(self):
        """Canonical list of (coefficient, key), sorted."""
        return [(self._terms[k], k) for k in sorted(self._terms)]

    def coefficient(self, key) -> Fraction:
        return self._terms.get(key, Fraction(0))

    def keys(self):
        return sorted(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self._terms
        return type(other) is type(self) and self._terms == other._terms

    def __hash__(self):
        return hash((type(self).__name__, frozenset(self._terms.items())))

    def __add__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return type(self)(out)

    def __neg__(self):
        return type(self)({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "_Combination":
        c = Fraction(c)
        return type(self)({k: v * c for k, v in self._terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def to_text(self) -> str:
        return textfmt.format_sum([(c, str(k)) for c, k in self.terms])

    def pretty(self) -> str:
        return textfmt.format_sum([(c, k.pretty()) for c, k in self.terms])

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()!r})"


class ZetaPolynomial(_Combination):
    __slots__ = ()
    _key_type = ZetaMonomial

    @classmethod
    def constant(cls, c) -> "ZetaPolynomial":
        return cls({ZetaMonomial(): Fraction(c)})

    @classmethod
    def parse(cls, text: str) -> "ZetaPolynomial":
        return cls((c, parse_monomial(atom)) for c, atom in textfmt.split_terms(text))

    def weights(self):
        return sorted({m.weight for m in self._terms})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ZetaPolynomial):
            return NotImplemented
        out: Dict[ZetaMonomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return ZetaPolynomial(out)

    def map_monomials(self, fn) -> "ZetaPolynomial":
        """Substitute each monomial by fn(monomial) -> ZetaPolynomial."""
        out = ZetaPolynomial()
        for m, c in self._terms.items():
            out = out + fn(m).scale(c)
        return out

    def evaluate(self, prec: PrecisionLike = None) -> mpf:
        prec = as_precision(prec)
        with mp.workprec(prec.work_bits):
            total = mpf(0)
            for c, m in self.terms:
                total += (mpf(c.numerator) / c.denominator) * m.evaluate(prec.work_bits)
        return round_to(total, prec)


class AmzvCombination(_Combination):
    __slots__ = ()
    _key_type = AmzvIndex

    def _check_key(self, key):
        super()._check_key(key)
        if not key.converges:
            raise DivergentIndex(f"{key} diverges")

    @classmethod
    def parse(cls, text: str) -> "AmzvCombination":
        return cls((c, parse_index(atom)) for c, atom in textfmt.split_terms(text))

    def weights(self):
        return sorted({idx.weight for idx in self._terms})

    def evaluate(self, prec: PrecisionLike = None, evaluator=None) -> mpf:
        """Numeric value, each index evaluated by ``evaluator`` (default: lemma quadrature)."""
        prec = as_precision(prec)
        evaluator = evaluator or amzv_eval_lemma
        with mp.workprec(prec.work_bits):
            total = mpf(0)
            for c, idx in self.terms:
                total += (mpf(c.numerator) / c.denominator) * evaluator(idx, prec)
        return round_to(total, prec)


def parse_mixed(text: str) -> Tuple[ZetaPolynomial, AmzvCombination]:
    """Split a right-hand side into its zeta-monomial and AMZV parts."""
    zeta_terms, amzv_terms = [], []
    for c, atom in textfmt.split_terms(text):
        if atom.startswith("z("):
            amzv_terms.append((c, parse_index(atom)))
        else:
            zeta_terms.append((c, parse_monomial(atom)))
    return ZetaPolynomial(zeta_terms), AmzvCombination(amzv_terms)


def format_mixed(zeta: ZetaPolynomial, amzv: AmzvCombination, pretty=False) -> str:
    items = [(c, m.pretty() if pretty else str(m)) for c, m in zeta.terms]
    items += [(c, i.pretty() if pretty else str(i)) for c, i in amzv.terms]
    return textfmt.format_sum(items)


# ---------------------------------------------------------------------------
# closed forms and reduction rules
# ---------------------------------------------------------------------------

def zeta_bar_closed(n: int) -> ZetaPolynomial:
    """zeta(n-bar) = (2^(1-n) - 1) zeta(n) for n >= 2."""
    if int(n) != n or n < 2:
        raise DomainError(f"zeta_bar_closed needs n >= 2 (zeta(1-bar) = -log 2 is separate), got {n}")
    n = int(n)
    return ZetaPolynomial({ZetaMonomial.of(n): Fraction(1, 2 ** (n - 1)) - 1})


@dataclass(frozen=True)
class ReductionRule:
    lhs: AmzvIndex
    rhs_zeta: ZetaPolynomial
    rhs_amzv: AmzvCombination = field(default_factory=AmzvCombination)
    tag: Optional[str] = None

    def __post_init__(self):
        if not self.lhs.converges:
            raise DivergentIndex(f"rule for divergent index {self.lhs}")
        w = self.lhs.weight
        bad = [str(m) for m in self.rhs_zeta.keys() if m.weight != w]
        bad += [str(i) for i in self.rhs_amzv.keys() if i.weight != w]
        if bad:
            raise DomainError(f"rule for {self.lhs} (weight {w}) is not weight-homogeneous: {', '.join(bad)}")
        if self.lhs in self.rhs_amzv.keys():
            raise DomainError(f"rule for {self.lhs} refers to itself")

    def to_text(self) -> str:
        s = f"{self.lhs} := {format_mixed(self.rhs_zeta, self.rhs_amzv)}"
        return s + (f"  @{self.tag}" if self.tag else "")

    def pretty(self) -> str:
        return f"{self.lhs.pretty()} = {format_mixed(self.rhs_zeta, self.rhs_amzv, pretty=True)}"


class RuleTable(Mapping):
    """Reduction rules keyed by left-hand index."""

    def __init__(self, rules: Iterable[ReductionRule] = (), source: str = "<memory>"):
        self._rules: Dict[AmzvIndex, ReductionRule] = {}
        self.source = source
        for r in rules:
            if r.lhs in self._rules:
                raise DomainError(f"duplicate rule for {r.lhs}")
            self._rules[r.lhs] = r

    def __getitem__(self, idx):
        return self._rules[idx]

    def __iter__(self):
        return iter(sorted(self._rules))

    def __len__(self):
        return len(self._rules)

    def to_text(self) -> str:
        return "\n".join(self._rules[k].to_text() for k in self) + "\n"

    @classmethod
    def from_text(cls, text: str, source: str = "<text>") -> "RuleTable":
        rules = []
        for line in textfmt.iter_data_lines(text):
            try:
                lhs = parse_index(line.key)
                zeta, amzv = parse_mixed(line.rhs)
                rules.append(ReductionRule(lhs, zeta.scale(line.scale), amzv.scale(line.scale), line.tag))
            except (ValueError, DomainError) as exc:
                raise TableFormatError(str(exc), line.line_no, line.raw) from None
        try:
            return cls(rules, source)
        except DomainError as exc:
            raise TableFormatError(str(exc)) from None


def load_rule_table(path: Union[str, Path, None] = None) -> RuleTable:
    """Load a reduction table; ``None`` gives the embedded table."""
    if path is None:
        return default_rule_table()
    return RuleTable.from_text(textfmt.read_text(path), source=str(path))


@lru_cache(maxsize=1)
def default_rule_table() -> RuleTable:
    p = textfmt.data_path("reductions.txt")
    return RuleTable.from_text(p.read_text(encoding="utf-8"), source="embedded:reductions.txt")


# ---------------------------------------------------------------------------
# nested-sum oracle
# ---------------------------------------------------------------------------

AVERAGING_LEVELS = 4


def amzv_nested_sum(idx: AmzvIndex, N: int = 10 ** 5, prec: PrecisionLike = None):
    """Truncated defining series, evaluated level by level with prefix sums.

    Cost is O(N * depth).  The arithmetic is binary64, so the result is
    good to roughly 1e-12 at best whatever ``prec`` is; it is an oracle,
    not a production evaluator.  An alternating outer sum is finished by
    averaging neighbouring partial sums ``AVERAGING_LEVELS`` times; a
    non-alternating one gets the integral tail a_N * N / (s_1 - 1).
    Returns (value, error_estimate), the estimate being the size of the
    last correction applied plus a crude bound on binary64 rounding.
    """
    if not amzv_converges(idx):
        raise DivergentIndex(f"{idx} diverges")
    if N < 10:
        raise DomainError(f"truncation N must be >= 10, got {N}")
    n = np.arange(1, N + 1, dtype=np.float64)
    sign = np.where(n % 2 == 1, -1.0, 1.0)
    partial = None
    term = None
    for e, barred in reversed(idx.parts):
        term = n ** (-float(e))
        if barred:
            term = term * sign
        if partial is not None:
            term = term * np.concatenate(([0.0], partial[:-1]))
        partial = np.cumsum(term)
    s1, barred1 = idx.parts[0]
    if barred1:
        # repeated averaging of the last partial sums; one level is the
        # plain average of S_(N-1) and S_N
        window = partial[-(AVERAGING_LEVELS + 1):].copy()
        previous = window[-1]
        for _ in range(AVERAGING_LEVELS):
            previous = window[-1]
            window = 0.5 * (window[1:] + window[:-1])
        value = window[-1]
        correction = value - previous
    else:
        correction = term[-1] * N / (s1 - 1)
        value = partial[-1] + correction
    # binary64 rounding accumulated over N additions per level
    rounding = idx.depth * N * float(np.finfo(np.float64).eps) * max(1.0, abs(float(value)))
    return hp(repr(float(value)), prec), hp(repr(abs(float(correction)) + rounding), prec)


# ---------------------------------------------------------------------------
# lemma-quadrature evaluator
# ---------------------------------------------------------------------------

def _log_integrand(p: int, q: int, with_weight: bool):
    """u^p log(1+e^-u)^q, times 1/(1+e^u) when ``with_weight``."""

    def f(u):
        v = u ** p if p else mpf(1)
        if q:
            v *= mpmath.log1p(mpmath.exp(-u)) ** q
        if with_weight:
            v /= 1 + mpmath.exp(u)
        return v

    return f


def lemma_integral(p: int, q: int, with_weight: bool, prec: PrecisionLike = None):
    """Quadrature of int_0^oo u^p L^q [e^-u/(1+e^-u)] du."""
    prec = as_precision(prec)
    decay = q + (1 if with_weight else 0)
    if decay < 1:
        raise DomainError("integrand does not decay")
    return integrate_semi_infinite(_log_integrand(p, q, with_weight), Envelope(p, 0, decay), prec)


def lemma_paths(idx: AmzvIndex, prec: PrecisionLike = None):
    """Evaluate (m-bar, {1}_k) by every applicable integral representation.

    Returns a dict path-name -> (value, error_estimate).  'part1' uses
    int u^p L^q with p = m-2, q = k+1 (needs m >= 2); 'part2' uses
    int u^p L^q e^-u/(1+e^-u) with p = m-1, q = k.
    """
    shape = idx.bar_ones_shape()
    if shape is None:
        raise ShapeError(f"{idx} is not of shape (m-bar, 1, ..., 1)")
    m, k = shape
    prec = as_precision(prec)
    out = {}
    with mp.workprec(prec.work_bits):
        if m >= 2:
            p, q = m - 2, k + 1
            r = lemma_integral(p, q, False, prec.work_bits)
            norm = (-1) ** q * math.factorial(p) * math.factorial(q)
            out["part1"] = (r.value / norm, (r.error_estimate + r.tail_bound) / abs(norm))
        p, q = m - 1, k
        r = lemma_integral(p, q, True, prec.work_bits)
        norm = (-1) ** (q - 1) * math.factorial(p) * math.factorial(q)
        out["part2"] = (r.value / norm, (r.error_estimate + r.tail_bound) / abs(norm))
    return {name: (round_to(v, prec), round_to(e, prec)) for name, (v, e) in out.items()}


def amzv_eval_lemma(idx: AmzvIndex, prec: PrecisionLike = None, check_paths: bool = True) -> mpf:
    """Value of zeta(m-bar, {1}_k) by quadrature.

    When both integral representations apply they are compared and
    :class:`PathDisagreement` is raised if they differ by more than their
    combined error estimates plus a few ulps; the first one is returned.
    """
    prec = as_precision(prec)
    return _eval_lemma_cached(idx, prec.bits, bool(check_paths))


@lru_cache(maxsize=None)
def _eval_lemma_cached(idx: AmzvIndex, bits: int, check_paths: bool) -> mpf:
    shape = idx.bar_ones_shape()
    if shape is None:
        raise ShapeError(f"{idx} is not of shape (m-bar, 1, ..., 1)")
    m, k = shape
    if m >= 2 and not check_paths:
        p, q = m - 2, k + 1
        with mp.workprec(bits + 20):
            r = lemma_integral(p, q, False, bits + 20)
            v = r.value / ((-1) ** q * math.factorial(p) * math.factorial(q))
        return round_to(v, bits)
    paths = lemma_paths(idx, bits)
    if "part1" not in paths:
        return paths["part2"][0]
    (v1, e1), (v2, e2) = paths["part1"], paths["part2"]
    with mp.workprec(bits + 20):
        slack = mpf(2) ** (24 - bits) * max(1, abs(v1))
        if abs(v1 - v2) > e1 + e2 + slack:
            raise PathDisagreement(
                f"{idx}: integral representations disagree by {mpmath.nstr(abs(v1 - v2), 5)}"
            )
    return v1


def amzv_numeric(idx: AmzvIndex, prec: PrecisionLike = None, rules: Optional[Mapping] = None,
                 _depth: int = 0):
    """Numeric value preferring exact reductions; returns (value, provenance).

    Provenance is one of 'reduction-table', 'closed-form' or
    'lemma-quadrature'.
    """
    prec = as_precision(prec)
    if _depth > 32:
        raise DomainError("reduction rules nest too deeply (cycle?)")
    if rules is not None and idx in rules:
        rule = rules[idx]
        with mp.workprec(prec.work_bits):
            v = rule.rhs_zeta.evaluate(prec.work_bits)
            for c, sub in rule.rhs_amzv.terms:
                sv, _ = amzv_numeric(sub, prec.work_bits, rules, _depth + 1)
                v += (mpf(c.numerator) / c.denominator) * sv
        return round_to(v, prec), "reduction-table"
    if idx.depth == 1 and idx.parts[0][1]:
        n = idx.parts[0][0]
        if n == 1:
            return -log2_value(prec), "closed-form"
        return zeta_bar_closed(n).evaluate(prec), "closed-form"
    return amzv_eval_lemma(idx, prec), "lemma-quadrature"


def verify_reduction(rule: ReductionRule, prec: PrecisionLike = None) -> mpf:
    """|lhs - rhs| with every AMZV evaluated by lemma quadrature."""
    prec = as_precision(prec)
    with mp.workprec(prec.work_bits):
        lhs = amzv_eval_lemma(rule.lhs, prec.work_bits)
        rhs = rule.rhs_zeta.evaluate(prec.work_bits) + rule.rhs_amzv.evaluate(prec.work_bits)
        res = abs(lhs - rhs)
    return round_to(res, prec)


# ---------------------------------------------------------------------------
# Zagier's identity  zeta({2-bar,1}_n) = 8^-n zeta({3}_n)
# ---------------------------------------------------------------------------

def zagier_indices(n: int):
    if n < 1:
        raise DomainError(f"repetition count must be >= 1, got {n}")
    return AmzvIndex.of(*([-2, 1] * n)), AmzvIndex.of(*([3] * n))


def zagier_check(n: int, prec: PrecisionLike = None, N: Optional[int] = None, method: Optional[str] = None):
    """|zeta({2-bar,1}_n) - 8^-n zeta({3}_n)|.

    ``method`` is 'lemma' (only n = 1: quadrature against zeta(3)/8) or
    'nested' (both sides by truncated nested sums at ``N``).  The default
    is 'lemma' for n = 1 and 'nested' otherwise.
    """
    lhs_idx, rhs_idx = zagier_indices(n)
    prec = as_precision(prec)
    method = method or ("lemma" if n == 1 else "nested")
    if method == "lemma":
        if n != 1:
            raise ShapeError("the quadrature path only covers n = 1")
        with mp.workprec(prec.work_bits):
            res = abs(amzv_eval_lemma(lhs_idx, prec.work_bits) - zeta_value(3, prec.work_bits) / 8)
        return round_to(res, prec)
    if method != "nested":
        raise DomainError(f"unknown method {method!r}")
    N = N or 10 ** 6
    lhs, _ = amzv_nested_sum(lhs_idx, N, prec)
    rhs, _ = amzv_nested_sum(rhs_idx, N, prec)
    with mp.workprec(prec.work_bits):
        res = abs(lhs - rhs / mpf(8) ** n)
    return round_to(res, prec)


def zeta33_stuffle(prec: PrecisionLike = None) -> mpf:
    """zeta(3,3) = (zeta(3)^2 - zeta(6)) / 2 from the stuffle product."""
    prec = as_precision(prec)
    with mp.workprec(prec.work_bits):
        v = (zeta_value(3, prec.work_bits) ** 2 - zeta_value(6, prec.work_bits)) / 2
    return round_to(v, prec)
