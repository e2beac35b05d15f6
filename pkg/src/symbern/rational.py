"""Exact rational parsing and serialization.

All exact quantities in the package are :class:`fractions.Fraction`. On the
wire they travel as lowest-terms ``"num/den"`` strings because JSON numbers
are binary floats.
"""

from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*$")
_DECIMAL_RE = re.compile(r"^\s*([+-]?)(\d*)(?:\.(\d*))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"a/b"``, an integer, or a plain decimal like ``"-0.22"`` exactly.

    Scientific notation and floats are rejected; a float has already lost
    the exact value the caller meant.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"refusing inexact value {text!r}; pass a string")
    if isinstance(text, int):
        return Fraction(text)
    m = _FRACTION_RE.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return Fraction(int(m.group(1)), den)
    m = _DECIMAL_RE.match(text)
    if m and (m.group(2) or m.group(3)):
        sign, whole, frac = m.group(1), m.group(2) or "0", m.group(3) or ""
        value = Fraction(int(whole + frac), 10 ** len(frac))
        return -value if sign == "-" else value
    raise ValueError(f"not an exact fraction or decimal: {text!r}")


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
