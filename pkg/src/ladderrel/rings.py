"""Exact rational scalars and small helpers shared by the polynomial layer.

All exact arithmetic in this package runs on arbitrary-precision rationals.
We use gmpy2.mpq when available (much faster on the huge integers produced
by high-order recurrences) and fall back to fractions.Fraction otherwise.
Both register as numbers.Rational, so the rest of the code is agnostic.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)


def is_rational(x) -> bool:
    """True for exact rational scalars (int, Fraction, mpq)."""
    return isinstance(x, numbers.Rational)


def rational(x) -> Q:
    """Coerce an int/Fraction/mpq/'num/den' string to the working rational type."""
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, numbers.Rational):
        return Q(x.numerator, x.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rational(s: str) -> Q:
    """Parse 'num/den' or a plain integer string into an exact rational."""
    s = s.strip()
    if "/" in s:
        num, den = s.split("/", 1)
        return Q(int(num), int(den))
    if "." in s:
        # Decimal literals are exact: 0.25 -> 1/4.
        return Q(Fraction(s))
    return Q(int(s))


def format_rational(x) -> str:
    """Render a rational as 'num/den' (plain integer when den == 1)."""
    x = rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
