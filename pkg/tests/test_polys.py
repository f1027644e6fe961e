from fractions import Fraction

import numpy as np
import pytest

from cfvar.polys import (
    Poly,
    count_roots,
    integer_primitive,
    isolate_roots,
    poly_gcd,
    refine_enclosure,
    sqrt_bracket,
    square_free,
)


def test_arithmetic_roundtrip():
    x = Poly.x()
    p = (x - 1) * (x + 2) * (x - Fraction(1, 3))
    q, r = p.divmod(x - 1)
    assert r.is_zero()
    assert q == (x + 2) * (x - Fraction(1, 3))
    assert p(Fraction(1, 3)) == 0
    assert p(2) == (2 - 1) * (2 + 2) * Fraction(5, 3)


def test_derivative_and_gcd():
    x = Poly.x()
    p = (x - 2) ** 3 * (x + 1)
    g = poly_gcd(p, p.derivative())
    assert g == (x - 2) ** 2 * (1 / ((x - 2) ** 2).leading())
    assert square_free(p) == (x - 2) * (x + 1)


def test_integer_primitive_canonical():
    x = Poly.x()
    p = Fraction(-6, 4) * (x**2 - 1)
    coeffs, scale = integer_primitive(p)
    assert coeffs == (1, 0, -1)
    assert scale == Fraction(-3, 2)
    # scalar multiples canonicalize identically
    coeffs2, _ = integer_primitive(p * Fraction(7, 5))
    assert coeffs2 == coeffs


def test_count_roots_against_numpy():
    rng = np.random.default_rng(7)
    for _ in range(25):
        deg = int(rng.integers(2, 7))
        ints = rng.integers(-9, 10, size=deg + 1)
        if ints[-1] == 0:
            ints[-1] = 3
        p = Poly([Fraction(int(c)) for c in ints])
        roots = np.roots(list(map(float, reversed([c for c in p.coeffs]))))
        real = sorted(r.real for r in roots if abs(r.imag) < 1e-9)
        # distinct real roots strictly inside (-100, 100)
        distinct = []
        for r in real:
            if not distinct or abs(r - distinct[-1]) > 1e-6:
                distinct.append(r)
        got = count_roots(p, Fraction(-100), Fraction(100))
        assert got == len(distinct), (p, distinct)


def test_isolation_golden_roots():
    x = Poly.x()
    p = (x**2 - 2) * (x - 3)  # roots -sqrt2, sqrt2, 3
    enc = isolate_roots(p, Fraction(0), "inf")
    assert len(enc) == 2
    lo, hi = sqrt_bracket(2)
    a, b = enc[0]
    assert a < lo and hi < b or (a <= lo <= b or a <= hi <= b)
    assert a <= hi and lo <= b  # bracket of sqrt(2) overlaps the enclosure
    assert b - a <= Fraction(1, 10**12)
    a, b = enc[1]
    assert a < 3 < b


def test_isolation_width_and_refine():
    x = Poly.x()
    p = x**2 - 2 * x - 1  # root 1 + sqrt(2)
    enc = isolate_roots(p, Fraction(1), "inf")
    assert len(enc) == 1
    a, b = enc[0]
    assert b - a <= Fraction(1, 10**12)
    lo, hi = sqrt_bracket(2)
    assert a <= 1 + hi and 1 + lo <= b
    a2, b2 = refine_enclosure(p, Fraction(2), Fraction(3), Fraction(1, 10**15))
    assert b2 - a2 <= Fraction(1, 10**15)
    assert a2 <= 1 + hi and 1 + lo <= b2


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        isolate_roots(Poly(), Fraction(0), "inf")
