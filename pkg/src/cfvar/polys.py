"""Dense univariate polynomials over exact rationals, with Sturm root isolation.

Coefficients are `fractions.Fraction` stored in ascending degree order.  All
arithmetic is exact; nothing here touches floating point except the optional
float evaluation helper.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt


def _trim(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Immutable dense polynomial with Fraction coefficients (ascending)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def constant(c):
        return Poly((Fraction(c),))

    @staticmethod
    def x():
        return Poly((0, 1))

    @staticmethod
    def from_descending(coeffs):
        return Poly(tuple(reversed(list(coeffs))))

    # -- basic queries ---------------------------------------------------------

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def leading(self):
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def descending(self):
        return tuple(reversed(self.coeffs))

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c:
                terms.append(f"{c}*x^{k}" if k else f"{c}")
        return "Poly(" + " + ".join(terms) + ")"

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        other = other if isinstance(other, Poly) else Poly.constant(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return Poly(a)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = other if isinstance(other, Poly) else Poly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return Poly.constant(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(tuple(c * Fraction(other) for c in self.coeffs))
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other):
        """Exact Euclidean division over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 1)
        r = list(self.coeffs)
        d = other.degree
        lead = other.leading()
        while len(_trim(r)) - 1 >= d:
            r = list(_trim(r))
            k = len(r) - 1 - d
            f = r[-1] / lead
            q[k] = f
            for i, c in enumerate(other.coeffs):
                r[k + i] -= f * c
            r.pop()
        return Poly(q), Poly(r)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self):
        return Poly(tuple(self.coeffs[k] * k for k in range(1, len(self.coeffs))))

    def __call__(self, x):
        """Horner evaluation; exact for Fraction/int input."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift_down(self, k):
        """Divide by x**k (requires the k lowest coefficients to vanish)."""
        if any(self.coeffs[i] != 0 for i in range(min(k, len(self.coeffs)))):
            raise ValueError("polynomial not divisible by x**%d" % k)
        return Poly(self.coeffs[k:])

    def low_zero_order(self):
        """Multiplicity of the root x = 0."""
        if self.is_zero():
            return 0
        k = 0
        while self.coeffs[k] == 0:
            k += 1
        return k


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the rationals."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a * (1 / a.leading())


def square_free(p: Poly) -> Poly:
    """Square-free part p / gcd(p, p')."""
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p
    return p.divmod(g)[0]


def integer_primitive(p: Poly):
    """Scale to coprime integer coefficients with positive leading coefficient.

    Returns (descending integer coefficient tuple, scale) with
    p = scale * primitive.
    """
    if p.is_zero():
        return (), Fraction(0)
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    content = 0
    for v in ints:
        content = gcd(content, abs(v))
    sign = 1 if ints[-1] > 0 else -1
    ints = [v // (sign * content) for v in ints]
    scale = Fraction(sign * content, den)
    return tuple(reversed(ints)), scale


def sturm_chain(p: Poly):
    chain = [p, p.derivative()]
    while chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return chain


def _sign_changes(chain, x):
    signs = []
    for q in chain:
        v = q(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_changes_at_inf(chain, positive):
    signs = []
    for q in chain:
        if q.is_zero():
            continue
        s = 1 if q.leading() > 0 else -1
        if not positive and q.degree % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, lo, hi):
    """Distinct real roots of p in the open interval (lo, hi).

    Endpoints may be Fractions or the strings '-inf' / 'inf'.  Roots exactly at
    finite endpoints are excluded.
    """
    sf = square_free(p)
    chain = sturm_chain(sf)
    va = _sign_changes_at_inf(chain, False) if lo == "-inf" else _sign_changes(chain, lo)
    vb = _sign_changes_at_inf(chain, True) if hi == "inf" else _sign_changes(chain, hi)
    n = va - vb
    # Sturm counts roots in (lo, hi]; drop a root sitting exactly at hi.
    if hi != "inf" and sf(hi) == 0:
        n -= 1
    return n


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    lead = abs(p.leading())
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return Fraction(1) + m / lead


def isolate_roots(p: Poly, lo, hi, width=Fraction(1, 10**12)):
    """Disjoint rational enclosures of the distinct real roots of p in (lo, hi).

    Bisection on Sturm counts; every returned interval (a, b) has b - a <= width
    and contains exactly one root.  `hi` may be 'inf'.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    sf = square_free(p)
    if sf.degree <= 0:
        return []
    bound = root_bound(sf)
    a = Fraction(lo)
    b = bound if hi == "inf" else Fraction(hi)
    if b <= a:
        return []
    chain = sturm_chain(sf)

    def var(x):
        return _sign_changes(chain, x)

    # Nudge endpoints off exact roots (interval is open).
    eps = width / 4
    while sf(a) == 0:
        a += eps
    while sf(b) == 0:
        b -= eps

    out = []
    stack = [(a, b, var(a), var(b))]
    while stack:
        x0, x1, v0, v1 = stack.pop()
        n = v0 - v1
        if n == 0:
            continue
        if n == 1 and x1 - x0 <= width:
            out.append((x0, x1))
            continue
        mid = (x0 + x1) / 2
        if sf(mid) == 0:
            mid += min(eps, (x1 - x0) / 8)
        vm = var(mid)
        stack.append((x0, mid, v0, vm))
        stack.append((mid, x1, vm, v1))
    out.sort()
    return out


def refine_enclosure(p: Poly, lo: Fraction, hi: Fraction, width: Fraction):
    """Shrink an isolating interval for the single root of p in (lo, hi)."""
    sf = square_free(p)
    slo = sf(lo)
    if slo == 0:
        raise ValueError("endpoint is a root")
    while hi - lo > width:
        mid = (lo + hi) / 2
        smid = sf(mid)
        if smid == 0:
            half = width / 4
            return (mid - half, mid + half)
        if (slo > 0) == (smid > 0):
            lo = mid
            slo = smid
        else:
            hi = mid
    return (lo, hi)


def sqrt_bracket(n: int, digits: int = 30):
    """Rational bracket (lo, hi) around sqrt(n) of width 10**-digits."""
    scale = 10**digits
    s = isqrt(n * scale * scale)
    return Fraction(s, scale), Fraction(s + 1, scale)
