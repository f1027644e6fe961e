"""Exact condition algebra for isoparametric hypersurfaces.

A principal-curvature spectrum stores each curvature either as an exact
rational function of the leading curvature or, when a curvature is
individually irrational but comes in a pair with matching multiplicity, as the
pair's elementary symmetric functions (which the cotangent addition formulas
always make rational).  Trace power sums then follow from Newton's identities
and every map-type condition becomes a rational function whose numerator is
canonicalized to a primitive integer polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polys import (
    Poly,
    integer_primitive,
    isolate_roots,
    poly_gcd,
    refine_enclosure,
    sqrt_bracket,
    square_free,
)
from .rational import RationalFunction

CONDITION_KINDS = ("CF", "Q1", "Q2", "WC")

_X = RationalFunction(Poly.x())


@dataclass(frozen=True)
class SpectrumEntry:
    """One curvature value (or an irrational pair) with its multiplicity.

    Singles carry `value`; pairs carry the elementary symmetric functions
    (e1, e2) of two curvatures sharing the same multiplicity.
    """

    multiplicity: int
    value: object = None
    e1: object = None
    e2: object = None

    def __post_init__(self):
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        single = self.value is not None
        paired = self.e1 is not None and self.e2 is not None
        if single == paired:
            raise ValueError("entry is either a single value or a pair")

    @property
    def is_pair(self) -> bool:
        return self.value is None

    def count(self) -> int:
        return self.multiplicity * (2 if self.is_pair else 1)

    def power_sums(self):
        """(p1, p2, p3) of the entry's curvature multiset, without multiplicity."""
        if not self.is_pair:
            v = self.value
            return v, v * v, v * v * v
        e1, e2 = self.e1, self.e2
        p1 = e1
        p2 = e1 * e1 - 2 * e2
        p3 = e1 * e1 * e1 - 3 * e1 * e2
        return p1, p2, p3


@dataclass(frozen=True)
class PrincipalSpectrum:
    """Constant principal curvatures of a hypersurface in a space form."""

    entries: tuple
    curvature: Fraction = Fraction(1)

    @property
    def dimension(self) -> int:
        return sum(e.count() for e in self.entries)

    def trace_powers(self):
        """Signed sums (tr A, tr A^2, tr A^3); exact when the entries are exact."""
        t1 = t2 = t3 = 0
        for e in self.entries:
            p1, p2, p3 = e.power_sums()
            t1 = t1 + e.multiplicity * p1
            t2 = t2 + e.multiplicity * p2
            t3 = t3 + e.multiplicity * p3
        return t1, t2, t3


def trace_powers(spectrum: PrincipalSpectrum):
    return spectrum.trace_powers()


def condition_value(spectrum: PrincipalSpectrum, kind: str):
    """Scalar whose vanishing characterizes the requested map type."""
    kind = kind.upper()
    if kind not in CONDITION_KINDS:
        raise ValueError(f"unknown condition kind '{kind}'")
    t1, t2, t3 = spectrum.trace_powers()
    c = spectrum.curvature
    m = spectrum.dimension
    if kind == "CF":
        return c * (m - 1) * t1 - t1 * t2 + t3
    if kind == "Q1":
        return c * t1 - t3
    if kind == "Q2":
        return (m * c - t2) * t1
    return t1 * t2 - m * t3


def numeric_spectrum(g: int, t: float, multiplicities, curvature: float = 1.0):
    """Floating-point spectrum cot(t + (k-1) pi / g); the numeric oracle for the
    exact construction."""
    entries = tuple(
        SpectrumEntry(int(mult), value=1.0 / np.tan(t + k * np.pi / g))
        for k, mult in enumerate(multiplicities)
    )
    return PrincipalSpectrum(entries, curvature)


def _pair(e1: RationalFunction, e2: RationalFunction, mult: int) -> SpectrumEntry:
    return SpectrumEntry(mult, e1=e1, e2=e2)


def spherical_family_spectrum(g: int, multiplicities) -> PrincipalSpectrum:
    """Exact spectrum of the spherical isoparametric structure with g distinct
    curvatures, as rational data in the leading curvature.

    Curvatures appear in the angle order cot(t), cot(t + pi/g), ...; pairs that
    involve a square root are replaced by their symmetric functions, which
    requires the paired positions to share a multiplicity.
    """
    mults = [int(v) for v in multiplicities]
    if any(v < 1 for v in mults):
        raise ValueError("multiplicities must be positive")
    if g not in (1, 2, 3, 4, 6):
        raise ValueError("spherical families require g in {1, 2, 3, 4, 6}")
    if len(mults) != g:
        raise ValueError(f"need {g} multiplicities, got {len(mults)}")
    x = _X
    if g == 1:
        entries = [SpectrumEntry(mults[0], value=x)]
    elif g == 2:
        entries = [
            SpectrumEntry(mults[0], value=x),
            SpectrumEntry(mults[1], value=-1 / x),
        ]
    elif g == 3:
        if mults[1] != mults[2]:
            raise ValueError("positions 2 and 3 form an irrational pair and must share a multiplicity")
        den = 3 * x * x - 1
        entries = [
            SpectrumEntry(mults[0], value=x),
            _pair(-8 * x / den, -(x * x - 3) / den, mults[1]),
        ]
    elif g == 4:
        entries = [
            SpectrumEntry(mults[0], value=x),
            SpectrumEntry(mults[1], value=(x - 1) / (x + 1)),
            SpectrumEntry(mults[2], value=-1 / x),
            SpectrumEntry(mults[3], value=-(x + 1) / (x - 1)),
        ]
    else:
        if mults[1] != mults[5] or mults[2] != mults[4]:
            raise ValueError("positions (2,6) and (3,5) form irrational pairs and must share multiplicities")
        den26 = x * x - 3
        den35 = 3 * x * x - 1
        entries = [
            SpectrumEntry(mults[0], value=x),
            SpectrumEntry(mults[3], value=-1 / x),
            _pair(-8 * x / den26, -(3 * x * x - 1) / den26, mults[1]),
            _pair(-8 * x / den35, -(x * x - 3) / den35, mults[2]),
        ]
    return PrincipalSpectrum(tuple(entries), Fraction(1))


@dataclass(frozen=True)
class ConditionPolynomial:
    """Canonical integer condition polynomial: content one, positive leading
    coefficient, no power-of-lambda factor (recorded separately)."""

    coefficients: tuple  # descending degree; empty when identically satisfied
    kind: str
    family: str = ""
    zero_root_multiplicity: int = 0

    @property
    def identically_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def poly(self) -> Poly:
        return Poly.from_descending([Fraction(c) for c in self.coefficients])

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "family": self.family,
            "coefficients": [str(c) for c in self.coefficients],
            "zero_root_multiplicity": self.zero_root_multiplicity,
            "identically_satisfied": self.identically_zero,
        }


def canonical_condition(value, kind: str, family: str = "") -> ConditionPolynomial:
    """Canonicalize a rational-function condition into its integer numerator."""
    rf = value if isinstance(value, RationalFunction) else RationalFunction.coerce(value)
    num = rf.num
    if num.is_zero():
        return ConditionPolynomial((), kind, family, 0)
    k = num.low_zero_order()
    core = num.shift_down(k)
    coeffs, _ = integer_primitive(core)
    return ConditionPolynomial(coeffs, kind, family, k)


def condition_polynomial(
    g: int, multiplicities, kind: str, family: str = ""
) -> ConditionPolynomial:
    spectrum = spherical_family_spectrum(g, multiplicities)
    return canonical_condition(condition_value(spectrum, kind), kind.upper(), family)


@dataclass(frozen=True)
class RootEnclosure:
    low: Fraction
    high: Fraction

    def contains(self, lo: Fraction, hi: Fraction) -> bool:
        """Whether this enclosure overlaps the bracket (lo, hi)."""
        return self.low <= hi and lo <= self.high

    def midpoint(self) -> float:
        return float((self.low + self.high) / 2)

    def as_dict(self) -> dict:
        return {
            "low": f"{self.low.numerator}/{self.low.denominator}",
            "high": f"{self.high.numerator}/{self.high.denominator}",
            "value": self.midpoint(),
        }


IDENTICALLY_SATISFIED = "identically satisfied"
WIDTH = Fraction(1, 10**12)


def isolate_positive_roots(poly: ConditionPolynomial, interval=(Fraction(0), "inf")):
    """Disjoint enclosures (width <= 1e-12) of the real roots inside the open
    interval; a zero polynomial yields the identically-satisfied marker."""
    if poly.identically_zero:
        return IDENTICALLY_SATISFIED
    lo, hi = interval
    p = poly.poly()
    out = [RootEnclosure(a, b) for a, b in isolate_roots(p, lo, hi, WIDTH)]
    return out


def separate_from(enclosures, poly: ConditionPolynomial, bracket):
    """Refine enclosures until each is disjoint from the bracket (lo, hi) of an
    interval endpoint, then drop the ones at or below it."""
    lo, hi = bracket
    p = poly.poly()
    kept = []
    for enc in enclosures:
        a, b = enc.low, enc.high
        while a <= hi and lo <= b:
            a, b = refine_enclosure(p, a, b, (b - a) / 4)
            if b - a < Fraction(1, 10**40):
                raise ArithmeticError("root cannot be separated from the interval endpoint")
        if a > hi:
            kept.append(RootEnclosure(a, b))
    return kept


def surd_bracket(add: int, root_of: int, digits: int = 30):
    """Rational bracket of add + sqrt(root_of)."""
    lo, hi = sqrt_bracket(root_of, digits)
    return (add + lo, add + hi)


def divisible_by(poly: ConditionPolynomial, factor: Poly) -> bool:
    """Exact divisibility of the canonical polynomial by a rational factor."""
    if poly.identically_zero:
        return True
    _, rem = poly.poly().divmod(factor)
    return rem.is_zero()


def shares_all_roots(poly: ConditionPolynomial, reference: Poly) -> bool:
    """Whether the square-free part of `reference` divides the condition
    polynomial, i.e. every root of the reference is a condition root."""
    return divisible_by(poly, square_free(reference))


def kinds_agree(a: ConditionPolynomial, b: ConditionPolynomial) -> bool:
    """Canonical equality modulo the documented scalar / lambda-power freedom."""
    return a.coefficients == b.coefficients


def gcd_free_part(p: Poly, q: Poly) -> Poly:
    """p with all factors shared with q removed."""
    out = p
    while True:
        g = poly_gcd(out, q)
        if g.degree <= 0:
            return out
        out = out.divmod(g)[0]
