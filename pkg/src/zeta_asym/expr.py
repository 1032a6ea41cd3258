"""Exact symbolic terms in u, e^-u and log(1+e^-u), series in 1/n, and term-wise integration.

A term is ``c * u^p * E^k * L^q * C^-r`` with E = e^-u, L = log(1+e^-u)
and C = 1+e^-u.  The class is closed under multiplication, but the
(k, r) part is not unique: E*C^-1 = 1 - C^-1, for instance.  Sums are
therefore kept in a normal form built on y = E/(1+E) = 1/(1+e^u):

* terms with k <= r are expanded as y^k (1-y)^(r-k), giving keys k == r;
* terms with k > r become E^(k-r) y^r and are reduced with
  E*y = E - y until either the E or the y power is gone.

So every canonical key is (p, j, q, j) or (p, a, q, 0).  Two sums are
equal as functions of u exactly when their canonical forms are equal.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple, Union

import mpmath
from mpmath import mp, mpf

from . import textfmt
from .errors import DomainError, NonNilpotentInput, TableFormatError, UnmatchedShape
from .hp import Envelope, PrecisionLike, QuadratureResult, as_precision, integrate_semi_infinite, round_to
from .mzv import AmzvCombination, AmzvIndex

Key = Tuple[int, int, int, int]  # (p, k, q, r)


@dataclass(frozen=True)
class TermExpr:
    coef: Fraction
    p: int = 0
    k: int = 0
    q: int = 0
    r: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))
        if self.coef == 0:
            raise DomainError("a term needs a nonzero coefficient")
        if min(self.p, self.k, self.q, self.r) < 0:
            raise DomainError(f"negative exponent in term {self.key}")

    @property
    def key(self) -> Key:
        return (self.p, self.k, self.q, self.r)

    def __mul__(self, other: "TermExpr") -> "TermExpr":
        return TermExpr(self.coef * other.coef, self.p + other.p, self.k + other.k,
                        self.q + other.q, self.r + other.r)

    def atom(self) -> str:
        return format_atom(self.key)

    def __str__(self):
        return textfmt.format_sum([(self.coef, self.atom())])


def format_atom(key: Key) -> str:
    p, k, q, r = key
    parts = []
    for sym, e in (("u", p), ("E", k), ("L", q)):
        if e == 1:
            parts.append(sym)
        elif e > 1:
            parts.append(f"{sym}^{e}")
    if r:
        parts.append(f"C^-{r}")
    return "*".join(parts)


# -- normal form ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _normalize_kr(k: int, r: int) -> Tuple[Tuple[Fraction, int, int], ...]:
    """E^k C^-r as a combination of canonical (k', r') shapes."""
    out: Dict[Tuple[int, int], Fraction] = {}

    def add(c, kk, rr):
        out[(kk, rr)] = out.get((kk, rr), Fraction(0)) + c

    if k <= r:
        m = r - k
        for i in range(m + 1):
            add(Fraction(math.comb(m, i) * (-1) ** i), k + i, k + i)
    else:
        # E^a y^j with a = k - r, j = r
        stack = [(Fraction(1), k - r, r)]
        while stack:
            c, a, j = stack.pop()
            if a == 0:
                add(c, j, j)
            elif j == 0:
                add(c, a, 0)
            else:
                stack.append((c, a, j - 1))
                stack.append((-c, a - 1, j))
    return tuple((c, kk, rr) for (kk, rr), c in sorted(out.items()) if c)


def is_canonical_key(key: Key) -> bool:
    _, k, _, r = key
    return k == r or r == 0


class ExprSum:
    """Canonical sum of terms; immutable."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Iterable[TermExpr], Mapping[Key, Fraction], None] = None):
        acc: Dict[Key, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else ((t.key, t.coef) for t in terms)
            for (p, k, q, r), c in items:
                c = Fraction(c)
                if not c:
                    continue
                for c2, k2, r2 in _normalize_kr(k, r):
                    key = (p, k2, q, r2)
                    acc[key] = acc.get(key, Fraction(0)) + c * c2
        self._terms = {key: c for key, c in acc.items() if c}

    @classmethod
    def one(cls) -> "ExprSum":
        return cls({(0, 0, 0, 0): 1})

    @classmethod
    def term(cls, coef=1, p=0, k=0, q=0, r=0) -> "ExprSum":
        return cls([TermExpr(coef, p, k, q, r)])

    @property
    def terms(self) -> List[TermExpr]:
        return [TermExpr(self._terms[key], *key) for key in sorted(self._terms)]

    def as_dict(self) -> Dict[Key, Fraction]:
        return dict(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, ExprSum):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == ExprSum.one().scale(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "ExprSum") -> "ExprSum":
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return _raw(out)

    def __neg__(self):
        return _raw({key: -c for key, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "ExprSum":
        c = Fraction(c)
        if not c:
            return ExprSum()
        return _raw({key: v * c for key, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, ExprSum):
            return NotImplemented
        raw: Dict[Key, Fraction] = {}
        for (p1, k1, q1, r1), c1 in self._terms.items():
            for (p2, k2, q2, r2), c2 in other._terms.items():
                key = (p1 + p2, k1 + k2, q1 + q2, r1 + r2)
                raw[key] = raw.get(key, Fraction(0)) + c1 * c2
        return ExprSum(raw)

    __rmul__ = __mul__

    def to_text(self) -> str:
        return textfmt.format_sum([(t.coef, t.atom()) for t in self.terms])

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"ExprSum({self.to_text()!r})"

    def evaluate(self, u, prec: PrecisionLike = None) -> mpf:
        prec = as_precision(prec)
        with mp.workprec(prec.work_bits):
            v = _evaluator(self)(mpf(u))
        return round_to(v, prec)

    def max_p(self) -> int:
        return max((key[0] for key in self._terms), default=0)


def _raw(d: Dict[Key, Fraction]) -> ExprSum:
    """Wrap an already-canonical dict without re-normalizing."""
    s = ExprSum.__new__(ExprSum)
    s._terms = {key: c for key, c in d.items() if c}
    return s


def _evaluator(s: ExprSum) -> Callable[[mpf], mpf]:
    """Callable u -> value at the current mpmath precision."""
    terms = sorted(s._terms.items())

    def f(u):
        E = mpmath.exp(-u)
        L = mpmath.log1p(E)
        invC = 1 / (1 + E)
        total = mpf(0)
        for (p, k, q, r), c in terms:
            total += mpf(c.numerator) / c.denominator * u ** p * E ** k * L ** q * invC ** r
        return total

    return f


# -- text grammar --------------------------------------------------------------

_FACTOR = re.compile(r"^([uELC])(?:\^(-?\d+))?$")


def _parse_atom(atom: str) -> ExprSum:
    atom = atom.strip()
    if atom in ("", "1"):
        return ExprSum.one()
    factors, depth, start = [], 0, 0
    for i, ch in enumerate(atom):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            factors.append(atom[start:i])
            start = i + 1
    factors.append(atom[start:])
    key = [0, 0, 0, 0]
    result = ExprSum.one()
    for fac in factors:
        fac = fac.strip()
        if fac.startswith("(") and fac.endswith(")"):
            result = result * parse_exprsum(fac[1:-1])
            continue
        m = _FACTOR.match(fac)
        if not m:
            raise ValueError(f"bad factor {fac!r} in {atom!r}")
        sym, e = m.group(1), int(m.group(2) or 1)
        if sym == "C":
            if e < 0:
                key[3] -= e
            else:
                # positive powers of C = 1 + E
                result = result * ExprSum({(0, i, 0, 0): math.comb(e, i) for i in range(e + 1)})
            continue
        if e < 0:
            raise ValueError(f"negative power only allowed on C: {fac!r}")
        key["uEL".index(sym)] += e
    return result * ExprSum({tuple(key): 1})


def parse_exprsum(text: str) -> ExprSum:
    """Parse ``3 u*L^2 - u^3*E*C^-1 + ...``; parenthesised sub-sums are expanded."""
    total = ExprSum()
    for c, atom in textfmt.split_terms(text):
        total = total + _parse_atom(atom).scale(c)
    return total


def format_exprsum(s: ExprSum) -> str:
    return s.to_text()


# -- series in 1/n ---------------------------------------------------------------

class InvNSeries:
    """Truncated series sum_{m=0}^{cap} coeffs[m] / n^m with ExprSum coefficients."""

    __slots__ = ("cap", "_coeffs")

    def __init__(self, cap: int, coeffs: Optional[Mapping[int, ExprSum]] = None):
        if cap < 0:
            raise DomainError(f"order cap must be >= 0, got {cap}")
        self.cap = int(cap)
        self._coeffs = {}
        for m, c in (coeffs or {}).items():
            if m < 0:
                raise DomainError(f"negative order {m}")
            if m <= cap and c:
                self._coeffs[int(m)] = c

    def __getitem__(self, m: int) -> ExprSum:
        return self._coeffs.get(m, ExprSum())

    @property
    def coeffs(self) -> Dict[int, ExprSum]:
        return dict(sorted(self._coeffs.items()))

    def orders(self) -> List[int]:
        return sorted(self._coeffs)

    def __eq__(self, other):
        return isinstance(other, InvNSeries) and self.cap == other.cap and self._coeffs == other._coeffs

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, series_scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return series_scale(self, other)
        return series_mul(self, other)

    def truncate(self, cap: int) -> "InvNSeries":
        return InvNSeries(min(cap, self.cap), self._coeffs)

    def __repr__(self):
        body = ", ".join(f"{m}: {c}" for m, c in self.coeffs.items())
        return f"InvNSeries(cap={self.cap}, {{{body}}})"


def series_constant(value: Union[ExprSum, int, Fraction], cap: int) -> InvNSeries:
    if not isinstance(value, ExprSum):
        value = ExprSum.one().scale(value)
    return InvNSeries(cap, {0: value})


def series_add(a: InvNSeries, b: InvNSeries) -> InvNSeries:
    cap = min(a.cap, b.cap)
    out = {}
    for m in set(a.orders()) | set(b.orders()):
        if m <= cap:
            out[m] = a[m] + b[m]
    return InvNSeries(cap, out)


def series_scale(a: InvNSeries, c) -> InvNSeries:
    if isinstance(c, ExprSum):
        return InvNSeries(a.cap, {m: v * c for m, v in a.coeffs.items()})
    return InvNSeries(a.cap, {m: v.scale(c) for m, v in a.coeffs.items()})


def series_mul(a: InvNSeries, b: Union[InvNSeries, int, Fraction]) -> InvNSeries:
    if not isinstance(b, InvNSeries):
        return series_scale(a, b)
    cap = min(a.cap, b.cap)
    out: Dict[int, ExprSum] = {}
    for i in a.orders():
        for j in b.orders():
            if i + j <= cap:
                out[i + j] = out.get(i + j, ExprSum()) + a[i] * b[j]
    return InvNSeries(cap, out)


def series_shift(a: InvNSeries, by: int) -> InvNSeries:
    """Multiply by n^-by."""
    return InvNSeries(a.cap, {m + by: v for m, v in a.coeffs.items()})


def _require_nilpotent(s: InvNSeries, what: str):
    if s[0]:
        raise NonNilpotentInput(f"{what} needs a series without order-0 term, got {s[0]}")


def series_exp(s: InvNSeries) -> InvNSeries:
    """exp(s) = sum s^j / j!, exact because s has no order-0 part."""
    _require_nilpotent(s, "series_exp")
    result = series_constant(1, s.cap)
    power = series_constant(1, s.cap)
    for j in range(1, s.cap + 1):
        power = series_mul(power, s)
        if not power.orders():
            break
        result = series_add(result, series_scale(power, Fraction(1, math.factorial(j))))
    return result


def series_log1p(s: InvNSeries) -> InvNSeries:
    """log(1 + s) = sum (-1)^(j-1) s^j / j."""
    _require_nilpotent(s, "series_log1p")
    result = InvNSeries(s.cap)
    power = series_constant(1, s.cap)
    for j in range(1, s.cap + 1):
        power = series_mul(power, s)
        if not power.orders():
            break
        result = series_add(result, series_scale(power, Fraction((-1) ** (j - 1), j)))
    return result


# -- the expansion pipeline ------------------------------------------------------

def build_exponent_series(M: int) -> InvNSeries:
    """n log((1 - u/2n)/(1 + u/2n)) + u = -sum_k u^(2k+1) / ((2k+1) 4^k) n^-2k."""
    if M < 2:
        raise DomainError(f"order cap must be >= 2, got {M}")
    coeffs = {}
    for k in range(1, M // 2 + 1):
        coeffs[2 * k] = ExprSum.term(Fraction(-1, (2 * k + 1) * 4 ** k), p=2 * k + 1)
    return InvNSeries(M, coeffs)


def exp_correction_series(M: int) -> InvNSeries:
    """exp(D) - 1 for the exponent correction D; the bracket is 1 + E (1 + this)."""
    D = build_exponent_series(M)
    return series_exp(D) - series_constant(1, M)


def louchard_integrand_series(M: int = 9) -> Dict[int, ExprSum]:
    """Integrand coefficient of n^-m for 2 <= m <= M, after the constant 3/4 is split off.

    With x = 1/2 - u/(4n) the integral becomes
    (1/2n) int (1/2 + u/4n) exp((1/n) log(1 + E + E G)) du where G is
    :func:`exp_correction_series`.  Writing
    log(1 + E + E G) = L + log(1 + y G) and F = exp(...) - 1, the order-m
    integrand is F_(m-1)/4 + u F_(m-2)/8.
    """
    if M < 2:
        raise DomainError(f"order cap must be >= 2, got {M}")
    inner_cap = max(M - 2, 0)
    if inner_cap >= 2:
        G = exp_correction_series(inner_cap)
        yG = series_scale(G, ExprSum.term(1, k=1, r=1))
        lam = series_log1p(yG)
    else:
        lam = InvNSeries(inner_cap)
    L = series_constant(ExprSum.term(1, q=1), M)
    expo = series_shift(series_add(L, InvNSeries(M, lam.coeffs)), 1)
    F = series_exp(expo.truncate(M - 1))
    out = {}
    quarter = Fraction(1, 4)
    u_eighth = ExprSum.term(Fraction(1, 8), p=1)
    for m in range(2, M + 1):
        out[m] = F[m - 1].scale(quarter) + (F[m - 2] * u_eighth if m - 2 >= 1 else ExprSum())
    return out


# -- golden integrand data --------------------------------------------------------

@dataclass(frozen=True)
class IntegrandEntry:
    key: str
    prefactor: Fraction
    body: ExprSum

    @property
    def value(self) -> ExprSum:
        return self.body.scale(self.prefactor)


def load_integrand_table(path=None) -> Dict[str, IntegrandEntry]:
    text = textfmt.read_text(path) if path else textfmt.data_path("integrands.txt").read_text(encoding="utf-8")
    out = {}
    for line in textfmt.iter_data_lines(text):
        try:
            out[line.key] = IntegrandEntry(line.key, line.scale, parse_exprsum(line.rhs))
        except ValueError as exc:
            raise TableFormatError(str(exc), line.line_no, line.raw) from None
    return out


# -- integration rules --------------------------------------------------------------

def _z(m: int, k: int) -> AmzvIndex:
    return AmzvIndex.bar_ones(m, k)


def _comb(items) -> AmzvCombination:
    return AmzvCombination([(idx, c) for c, idx in items])


def _lemma_1_1(p, q):
    return _comb([(math.factorial(p) * math.factorial(q) * (-1) ** q, _z(p + 2, q - 1))])


def _lemma_1_2(p, q):
    return _comb([(math.factorial(p) * math.factorial(q) * (-1) ** (q - 1), _z(p + 1, q))])


def _diff(p, q):
    c = math.factorial(p) * math.factorial(q) * (-1) ** q
    return _comb([(c, _z(p + 2, q - 1)), (c, _z(p + 1, q))])


def _lemma_2(p, q):
    f = math.factorial(p) * math.factorial(q)
    if q == 0:
        return _comb([(-f, _z(p, 0))])
    items = [(-f, _z(p, 0))]
    for k in range(1, q + 1):
        s = f * (-1) ** (k - 1)
        items += [(s, _z(p, k)), (s, _z(p + 1, k - 1))]
    return _comb(items)


def _lemma_3(p, q):
    f = math.factorial(p) * math.factorial(q)
    items = []
    for k in range(q + 1):
        s = f * (-1) ** k
        items += [(s, _z(p, k)), (-s, _z(p + 1, k))]
    return _comb(items)


def _lemma_4_1(p, q):
    h = Fraction(math.factorial(p), 2)
    return _comb([(h, _z(p - 1, 0)), (-h, _z(p, 0))])


def _lemma_4_2(p, q):
    return _comb([(-math.factorial(p), _z(p - 1, 0))])


def _lemma_4_3(p, q):
    f = math.factorial(p)
    return _comb([(f, _z(p - 1, 1)), (-Fraction(3, 2) * f, _z(p - 1, 0)), (Fraction(3, 2) * f, _z(p, 0))])


def _lemma_4_1_plus_4_2(p, q):
    return _lemma_4_1(p, q) + _lemma_4_2(p, q)


@dataclass(frozen=True)
class LemmaRule:
    """Integration rule for u^p * shape * L^q over [0, oo).

    ``shape`` is the (k, r) of E^k C^-r, or the combined numerator
    'E(1-E)C^-3'.  q and p must lie in the closed ranges given (None means
    unbounded above).
    """

    name: str
    shape: Union[Tuple[int, int], str]
    q_range: Tuple[int, Optional[int]]
    p_min: int
    template: Callable[[int, int], AmzvCombination]

    def matches(self, shape, p: int, q: int) -> bool:
        lo, hi = self.q_range
        return shape == self.shape and q >= lo and (hi is None or q <= hi) and p >= self.p_min

    def apply(self, p: int, q: int) -> AmzvCombination:
        return self.template(p, q)


COMBINED_SHAPE = "E(1-E)C^-3"

LEMMA_RULES: Tuple[LemmaRule, ...] = (
    LemmaRule("log-power", (0, 0), (1, None), 0, _lemma_1_1),
    LemmaRule("log-power-weighted", (1, 1), (0, None), 0, _lemma_1_2),
    LemmaRule("log-power-over-C", (0, 1), (1, None), 0, _diff),
    LemmaRule("E-over-C2", (1, 2), (0, None), 1, _lemma_2),
    LemmaRule("E2-over-C2", (2, 2), (0, None), 1, _lemma_3),
    LemmaRule("E2-over-C3", (2, 3), (0, 0), 2, _lemma_4_1),
    LemmaRule("E-over-C3", (1, 3), (0, 0), 2, _lemma_4_1_plus_4_2),
    LemmaRule("E(1-E)-over-C3", COMBINED_SHAPE, (0, 0), 2, _lemma_4_2),
    LemmaRule("E(1-E)-over-C3-log", COMBINED_SHAPE, (1, 1), 2, _lemma_4_3),
)


def find_rule(shape, p: int, q: int) -> Optional[LemmaRule]:
    for rule in LEMMA_RULES:
        if rule.matches(shape, p, q):
            return rule
    return None


def integrate_term(t: TermExpr) -> AmzvCombination:
    """int_0^oo of a single term, by the first lemma rule that matches its raw shape."""
    rule = find_rule((t.k, t.r), t.p, t.q)
    if rule is None:
        raise UnmatchedShape([t])
    return rule.apply(t.p, t.q).scale(t.coef)


def _integrate_canonical(t: TermExpr) -> AmzvCombination:
    p, k, q, r = t.key
    if k == r and k <= 2:
        return integrate_term(t)
    if k == r == 3:
        # y^3 = [E(1-E)C^-3 - y + 3y^2] / 2, with the combined numerator
        # covered by a dedicated rule for q in {0, 1}
        rule = find_rule(COMBINED_SHAPE, p, q)
        if rule is None:
            raise UnmatchedShape([t])
        total = rule.apply(p, q)
        total = total - integrate_term(TermExpr(1, p, 1, q, 1))
        total = total + integrate_term(TermExpr(3, p, 2, q, 2))
        return total.scale(t.coef / 2)
    raise UnmatchedShape([t])


def integrate_exprsum(s: ExprSum) -> AmzvCombination:
    """Exact AMZV combination for int_0^oo s(u) du.

    Raises :class:`UnmatchedShape` listing every term no rule covers.
    """
    total = AmzvCombination()
    unmatched = []
    for t in s.terms:
        try:
            total = total + _integrate_canonical(t)
        except UnmatchedShape as exc:
            unmatched.extend(exc.terms)
    if unmatched:
        raise UnmatchedShape(unmatched)
    return total


# -- numeric integration -----------------------------------------------------------

def exprsum_envelope(s: ExprSum) -> Envelope:
    """|s(u)| <= (sum |c|) (1+u)^p_max e^-u, valid when every term carries E, L or y."""
    for p, k, q, r in s.as_dict():
        if k == 0 and q == 0:
            raise DomainError(f"term u^{p} without E, L or C^-1 does not decay")
    return Envelope(s.max_p(), 0, 1, scale=sum(abs(c) for c in s.as_dict().values()) or 1)


def integrate_exprsum_numeric(s: ExprSum, prec: PrecisionLike = None) -> QuadratureResult:
    prec = as_precision(prec)
    f = _evaluator(s)
    return integrate_semi_infinite(f, exprsum_envelope(s), prec)
