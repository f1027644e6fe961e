"""Exact rational functions in one variable over the rationals.

Used as the carrier for principal-curvature algebra: the cotangent addition
formulas make every needed symmetric combination a ratio of integer
polynomials in the leading curvature.
"""

from __future__ import annotations

from fractions import Fraction

from .polys import Poly, poly_gcd


class RationalFunction:
    """Reduced quotient of two polynomials; denominator has positive leading coefficient."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.constant(num) if not isinstance(num, (tuple, list)) else Poly(num)
        if den is None:
            den = Poly.constant(1)
        elif not isinstance(den, Poly):
            den = Poly.constant(den) if not isinstance(den, (tuple, list)) else Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly.constant(1)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        lead = den.leading()
        self.num = num * (1 / lead)
        self.den = den * (1 / lead)

    @staticmethod
    def x():
        return RationalFunction(Poly.x())

    @staticmethod
    def coerce(v):
        return v if isinstance(v, RationalFunction) else RationalFunction(Poly.constant(v))

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == RationalFunction.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.den == Poly.constant(1):
            return f"RF({self.num!r})"
        return f"RF({self.num!r} / {self.den!r})"

    def __add__(self, other):
        other = RationalFunction.coerce(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RationalFunction.coerce(other))

    def __rsub__(self, other):
        return RationalFunction.coerce(other) - self

    def __mul__(self, other):
        other = RationalFunction.coerce(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalFunction.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, n):
        out = RationalFunction.coerce(1)
        base = self
        for _ in range(n):
            out = out * base
        return out

    def __call__(self, x):
        """Evaluate; exact for Fraction input, float otherwise."""
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("pole at evaluation point")
        return self.num(x) / d
