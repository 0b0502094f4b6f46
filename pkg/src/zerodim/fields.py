"""Coefficient fields.

A field object supplies ``zero``, ``one``, ``coerce`` and the display hooks;
the elements themselves carry exact arithmetic through the usual operators.
The rationals are plain ``fractions.Fraction``; the rational-function field
Q(u) lives in ratfunc.py to keep the import graph acyclic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class RationalField:
    """Q with arbitrary-precision integers (fractions.Fraction elements)."""

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise TypeError(f"cannot coerce {value!r} into QQ")

    def canonical_scale(self, coeffs):
        """Multiplier turning coeffs into content-free integers, head positive."""
        den_lcm = 1
        for c in coeffs:
            d = c.denominator
            den_lcm = den_lcm // gcd(den_lcm, d) * d
        num_gcd = 0
        for c in coeffs:
            num_gcd = gcd(num_gcd, abs(c.numerator * (den_lcm // c.denominator)))
        scale = Fraction(den_lcm, num_gcd or 1)
        if coeffs and coeffs[0] * scale < 0:
            scale = -scale
        return scale

    def format_coeff(self, c):
        """(sign, factor-text or None); None means the factor is 1."""
        sign = "-" if c < 0 else "+"
        a = abs(c)
        return sign, None if a == 1 else str(a)

    def __repr__(self):
        return "QQ"

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()
