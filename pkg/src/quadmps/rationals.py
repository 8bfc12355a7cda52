"""Exact rational scalars and their wire format.

`Rational` is `fractions.Fraction`: always reduced, denominator positive,
arithmetic exact. Reports serialize rationals as strings, "num/den" with
the "/den" part omitted for integers, so that JSON stays exact and
byte-stable.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(-?\d+))?$")


def parse_rational(text: str | int) -> Fraction:
    """Parse "num" or "num/den" into a Fraction.

    Denominators must be positive: "3/0" and "3/-2" are rejected, signs
    belong on the numerator.
    """
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"rational must be a string or int, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise ParseError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = 1 if m.group(2) is None else int(m.group(2))
    if den <= 0:
        raise ParseError(f"denominator must be positive: {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Inverse of parse_rational, canonical form."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
