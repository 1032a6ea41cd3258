"""Integer relations among high-precision constants, and the conjecture drivers built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpf

from .coefficients import CONJECTURE_ONE_A, amzv_form, amzv_value, closed_form, conjecture1_combo
from .errors import ConjectureMismatch, DomainError, InsufficientPrecision, NoRelationFound
from .hp import Precision, PrecisionLike, as_precision, round_to
from .mzv import ZetaMonomial, ZetaPolynomial

DEFAULT_MAX_NORM = 10 ** 6
CONJECTURE_BITS = 512
# a verified relation must shrink its residual by this factor when the
# precision is doubled (or already sit at the doubled-precision noise floor)
VERIFY_SHRINK = mpf(10) ** -10

Values = Sequence[mpf]
ValueProvider = Callable[[Precision], Values]


@dataclass(frozen=True)
class RelationResult:
    coefficients: Tuple[int, ...]
    norm_bound: int
    confirmed_digits: int
    residual: mpf = mpf(0)
    verify_residual: mpf = mpf(0)

    def __post_init__(self):
        if not any(self.coefficients):
            raise ValueError("a relation needs a nonzero coefficient")


def _digits(bits: int) -> float:
    return bits * math.log10(2)


def _check_precision(n: int, bits: int, max_norm: int):
    need = 10 * n + math.log10(max_norm)
    if _digits(bits) < need:
        raise InsufficientPrecision(
            f"{n} constants with coefficients up to {max_norm} need {need:.0f} digits, have {_digits(bits):.0f}"
        )


def _residual(coeffs: Sequence[int], xs: Values, bits: int) -> Tuple[mpf, mpf]:
    with mp.workprec(bits + 20):
        r = abs(mpmath.fsum(c * x for c, x in zip(coeffs, xs)))
        scale = max(abs(x) for x in xs)
    return r, scale


def find_integer_relation(xs: Union[Values, ValueProvider], prec: PrecisionLike = None,
                          max_norm: int = DEFAULT_MAX_NORM) -> Optional[RelationResult]:
    """Search for integers c (|c_i| <= max_norm) with sum c_i x_i = 0.

    ``xs`` is either a list of values known to ``prec`` or a callable
    returning the values at a requested Precision.  With a callable the
    search runs at ``prec`` and the candidate is re-checked on values
    recomputed at twice the precision; with plain values the search runs
    at half of ``prec`` and the full values serve as the check.  The sign
    is fixed so that the first nonzero coefficient is positive.
    """
    prec = as_precision(prec)
    if callable(xs):
        search_bits = prec.bits
        search_xs = list(xs(prec))
        verify = lambda: (list(xs(prec.doubled())), prec.doubled().bits)  # noqa: E731
    else:
        search_bits = prec.bits // 2
        full = list(xs)
        search_xs = full
        verify = lambda: (full, prec.bits)  # noqa: E731
    n = len(search_xs)
    if n < 2:
        raise DomainError("need at least two constants")
    _check_precision(n, search_bits, max_norm)
    if not callable(xs):
        search_xs = [round_to(x, search_bits) for x in full]

    with mp.workprec(search_bits):
        tol = mpf(2) ** (-int(search_bits * 0.85))
        rel = mpmath.pslq([+x for x in search_xs], tol=tol, maxcoeff=max_norm, maxsteps=10 ** 5)
    if rel is None or not any(rel):
        return None
    lead = next(c for c in rel if c)
    coeffs = tuple(int(c) * (1 if lead > 0 else -1) for c in rel)
    if max(abs(c) for c in coeffs) > max_norm:
        return None

    r1, _ = _residual(coeffs, search_xs, search_bits)
    vxs, vbits = verify()
    r2, scale = _residual(coeffs, vxs, vbits)
    with mp.workprec(vbits + 20):
        floor = mpf(2) ** (32 - vbits) * scale * sum(abs(c) for c in coeffs)
        if r2 > max(r1 * VERIFY_SHRINK, floor):
            return None
        if r2 == 0:
            confirmed = int(_digits(vbits))
        else:
            confirmed = min(int(_digits(vbits)), int(-mpmath.log10(r2 / scale)))
    return RelationResult(coeffs, max_norm, confirmed, round_to(r1, search_bits), round_to(r2, vbits))


# -- zeta(2)-power basis -------------------------------------------------------------

@lru_cache(maxsize=None)
def even_zeta_ratio(k: int) -> Fraction:
    """zeta(2k) / zeta(2)^k as an exact rational."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    b = mpmath.bernfrac(2 * k)
    bern = Fraction(int(b[0]), int(b[1]))
    return (-1) ** (k + 1) * bern * 2 ** (2 * k) * 6 ** k / (2 * math.factorial(2 * k))


def to_zeta2_basis(poly: ZetaPolynomial) -> ZetaPolynomial:
    """Rewrite every even zeta value as a rational multiple of a zeta(2) power."""

    def conv(m: ZetaMonomial) -> ZetaPolynomial:
        factor = Fraction(1)
        exps = []
        for k, e in m.exps:
            if k % 2 == 0:
                factor *= even_zeta_ratio(k // 2) ** e
                exps.append((2, (k // 2) * e))
            else:
                exps.append((k, e))
        return ZetaPolynomial({ZetaMonomial(tuple(exps)): factor})

    return poly.map_monomials(conv)


def from_zeta2_basis(poly: ZetaPolynomial) -> ZetaPolynomial:
    """Display form: zeta(2)^a with a >= 2 becomes a multiple of zeta(2a)."""

    def conv(m: ZetaMonomial) -> ZetaPolynomial:
        d = m.as_dict()
        a = d.pop(2, 0)
        if a < 2:
            return ZetaPolynomial({m: 1})
        d[2 * a] = d.get(2 * a, 0) + 1
        return ZetaPolynomial({ZetaMonomial(tuple(d.items())): 1 / even_zeta_ratio(a)})

    return poly.map_monomials(conv)


@dataclass(frozen=True)
class ZetaBasis:
    weight: int
    monomials: Tuple[ZetaMonomial, ...]

    def __post_init__(self):
        if len(set(self.monomials)) != len(self.monomials):
            raise DomainError("basis monomials must be distinct")
        for m in self.monomials:
            if m.weight != self.weight:
                raise DomainError(f"{m} does not have weight {self.weight}")
            if any(k % 2 == 0 and k != 2 for k, _ in m.exps):
                raise DomainError(f"{m} is not in zeta(2)-power form")

    def values(self, prec: PrecisionLike = None) -> List[mpf]:
        return [m.evaluate(prec) for m in self.monomials]


def _odd_partitions(total: int, smallest: int = 3) -> List[Tuple[int, ...]]:
    if total == 0:
        return [()]
    out = []
    for part in range(smallest, total + 1, 2):
        for rest in _odd_partitions(total - part, part):
            out.append((part,) + rest)
    return out


def zeta_monomial_basis(w: int) -> ZetaBasis:
    """zeta(2)^a times products of odd zeta values >= 3, total weight w."""
    if not 2 <= w <= 12:
        raise DomainError(f"basis weight must lie in [2, 12], got {w}")
    monos = []
    for a in range(w // 2 + 1):
        for parts in _odd_partitions(w - 2 * a):
            monos.append(ZetaMonomial(((2, a),) + tuple((p, 1) for p in parts)))
    return ZetaBasis(w, tuple(sorted(monos)))


# -- conjecture drivers --------------------------------------------------------------

def amzv_path_value(j: int, prec: PrecisionLike = None) -> mpf:
    """I_j from its AMZV form with every AMZV evaluated by quadrature (no reduction table)."""
    v, _ = amzv_value(amzv_form(j), prec, rules=None)
    return v


def conjecture2_test(j: int, prec: PrecisionLike = CONJECTURE_BITS, max_norm: int = DEFAULT_MAX_NORM,
                     value_provider: Optional[Callable[[int, Precision], mpf]] = None) -> ZetaPolynomial:
    """Recover I_j as a rational polynomial in zeta values from blind numerics.

    The value of I_j comes from the AMZV path only.  The relation found
    over (I_j, basis of weight j) is turned into a polynomial in the
    zeta(2)-power basis and compared with the closed-form table, which
    serves only as the verdict.
    """
    if not 2 <= j <= 9:
        raise DomainError(f"order must lie in [2, 9], got {j}")
    basis = zeta_monomial_basis(j)
    provider = value_provider or (lambda jj, p: amzv_path_value(jj, p))

    def xs(p: Precision):
        return [provider(j, p)] + basis.values(p)

    rel = find_integer_relation(xs, prec, max_norm)
    if rel is None or rel.coefficients[0] == 0:
        raise NoRelationFound(f"no relation for I{j} over {len(basis.monomials)} monomials of weight {j}")
    c0 = rel.coefficients[0]
    found = ZetaPolynomial({m: Fraction(-c, c0) for c, m in zip(rel.coefficients[1:], basis.monomials)})
    expected = to_zeta2_basis(closed_form(j))
    if found != expected:
        raise ConjectureMismatch(f"I{j}: relation gives {found}, table gives {expected}")
    return found


def conjecture1_crosscheck(m: int, prec: PrecisionLike = None, a: Sequence = CONJECTURE_ONE_A) -> mpf:
    """|numeric(conjectured combination) - numeric(AMZV form)|, both by lemma quadrature."""
    prec = as_precision(prec)
    with mp.workprec(prec.work_bits):
        res = abs(conjecture1_combo(m, a).evaluate(prec.work_bits) - amzv_form(m).evaluate(prec.work_bits))
    return round_to(res, prec)
