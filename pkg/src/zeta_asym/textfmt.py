"""Line-oriented text format shared by the rule, coefficient and integrand tables.

A data line reads::

    KEY [SCALE] := RHS [@TAG]

``KEY`` is a single token, ``SCALE`` an optional rational prefactor that
multiplies the whole right-hand side, ``RHS`` a signed sum of terms and
``TAG`` an optional context label.  ``#`` starts a comment.  A term is an
optional rational coefficient (``3``, ``-17/2``) followed, after a space
or ``*``, by an atom whose meaning depends on the table: a zeta monomial
``z3^2*z2``, an alternating MZV ``z(b4,1^3)`` or an integrand product
``u^3*E*L^2*C^-1``.  A bare coefficient stands for itself times ``1``;
``0`` is the empty sum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, List, Optional, Tuple, Union

from .errors import TableFormatError

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")
_LEADING_COEF = re.compile(r"^(\d+(?:/\d+)?)(?:\s*\*\s*|\s+|$)")
_LINE = re.compile(
    r"^(?P<key>\S+)\s+(?:(?P<scale>[+-]?\d+(?:/\d+)?)\s+)?:=\s*(?P<rhs>.*?)\s*(?:@(?P<tag>\S+))?\s*$"
)


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational number: {text!r}")
    return Fraction(text)


def fmt_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def split_terms(rhs: str) -> List[Tuple[Fraction, str]]:
    """Split a signed sum into (coefficient, atom) pairs; atom '' means 1."""
    rhs = rhs.strip()
    if rhs in ("", "0"):
        return []
    chunks = []
    depth = 0
    start = 0
    for i, ch in enumerate(rhs):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {rhs!r}")
        elif ch in "+-" and depth == 0 and i > start:
            prev = rhs[start:i].rstrip()
            # a sign right after '^' or '*' belongs to an exponent/factor
            if prev and prev[-1] not in "^*":
                chunks.append(rhs[start:i])
                start = i
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {rhs!r}")
    chunks.append(rhs[start:])

    out = []
    for chunk in chunks:
        chunk = chunk.strip()
        sign = 1
        if chunk[:1] in "+-":
            sign = -1 if chunk[0] == "-" else 1
            chunk = chunk[1:].strip()
        if not chunk:
            raise ValueError(f"dangling sign in {rhs!r}")
        coef = Fraction(1)
        m = _LEADING_COEF.match(chunk)
        if m:
            coef = Fraction(m.group(1))
            chunk = chunk[m.end():].strip()
        out.append((sign * coef, chunk))
    return out


def format_sum(items: List[Tuple[Fraction, str]]) -> str:
    """Inverse of :func:`split_terms` for already-canonical items."""
    if not items:
        return "0"
    parts = []
    for i, (c, atom) in enumerate(items):
        c = Fraction(c)
        mag = abs(c)
        if atom in ("", "1"):
            body = fmt_rational(mag)
        elif mag == 1:
            body = atom
        else:
            body = f"{fmt_rational(mag)} {atom}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts)


@dataclass(frozen=True)
class DataLine:
    key: str
    scale: Fraction
    rhs: str
    tag: Optional[str]
    line_no: int
    raw: str


def iter_data_lines(text: str) -> Iterator[DataLine]:
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise TableFormatError("expected 'KEY [SCALE] := RHS [@TAG]'", no, raw)
        scale = Fraction(m.group("scale")) if m.group("scale") else Fraction(1)
        yield DataLine(m.group("key"), scale, m.group("rhs"), m.group("tag"), no, raw)


def read_text(source: Union[str, Path]) -> str:
    return Path(source).read_text(encoding="utf-8")


def data_path(name: str) -> Path:
    return Path(__file__).resolve().parent / "data" / name
