"""Classification routines for the closed-form families.

Covers the constant-mean-curvature flat tori in the three-sphere with their
product-torus radii, the two-dimensional criterion, Ricci-flat immersions into
flat space, and the isoparametric families in spheres, Euclidean and
hyperbolic space.  Every report derives its condition polynomial from first
principles through the exact spectrum algebra and compares against the
catalogued reference polynomial or root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import families
from .charts import ChartedMap
from .isopara import (
    IDENTICALLY_SATISFIED,
    ConditionPolynomial,
    PrincipalSpectrum,
    RootEnclosure,
    SpectrumEntry,
    canonical_condition,
    condition_polynomial,
    condition_value,
    isolate_positive_roots,
    separate_from,
    spherical_family_spectrum,
    surd_bracket,
)
from .polys import Poly, integer_primitive, isolate_roots, sqrt_bracket, square_free
from .rational import RationalFunction


# ---------------------------------------------------------------------------
# flat tori in the three-sphere
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatTorusClassification:
    case: str  # "i", "ii" or "iii"
    mean_curvature_squared: float | None  # extra non-minimal solution in case iii

    @property
    def minimal_only(self) -> bool:
        return self.case in ("i", "ii")


def flat_torus_classify(alpha: float, beta: float) -> FlatTorusClassification:
    """Solutions of the constant-mean-curvature flat-torus condition
    -4 H (alpha + 2 (alpha+beta) H^2) = 0 by coefficient case."""
    if alpha == 0.0 and beta == 0.0:
        raise ValueError("alpha and beta must not both vanish")
    s = alpha + beta
    if s == 0.0:
        return FlatTorusClassification("i", None)
    if alpha / s >= 0.0:
        return FlatTorusClassification("ii", None)
    return FlatTorusClassification("iii", -alpha / (2.0 * s))


def flat_torus_residual(alpha: float, beta: float, h: float) -> float:
    """Closed-form residual magnitude along the unit normal for a CMC flat torus."""
    return -4.0 * h * (alpha + 2.0 * (alpha + beta) * h * h)


def clifford_radii(alpha: float, beta: float):
    """Radii of the non-minimal product torus solving the case-iii condition."""
    cls = flat_torus_classify(alpha, beta)
    if cls.case != "iii":
        raise ValueError("no non-minimal product torus exists for these coefficients")
    if alpha + 2.0 * beta == 0.0:
        raise ValueError("degenerate coefficient combination")
    s_sq = 2.0 * (alpha + beta) / (alpha + 2.0 * beta)
    if not 0.0 < s_sq <= 1.0:
        raise ValueError("no non-minimal product torus exists for these coefficients")
    s = np.sqrt(s_sq)
    r1 = 0.5 * (np.sqrt(1.0 + s) - np.sqrt(1.0 - s))
    r2 = 0.5 * (np.sqrt(1.0 + s) + np.sqrt(1.0 - s))
    return float(r1), float(r2)


def chebyshev_net(omega):
    """Asymptotic-net data of a flat torus in the three-sphere.

    Given the net angle function omega(s1, s2), returns callables for the
    metric, the normal-valued form coefficient, and the mean curvature
    -cot(omega); classification applies only when the latter is constant.
    """

    def metric(s1, s2):
        c = np.cos(omega(s1, s2))
        return np.array([[1.0, c], [c, 1.0]])

    def form(s1, s2):
        s = np.sin(omega(s1, s2))
        return np.array([[0.0, s], [s, 0.0]])

    def mean_curvature(s1, s2):
        return -1.0 / np.tan(omega(s1, s2))

    return metric, form, mean_curvature


# ---------------------------------------------------------------------------
# dimension-two criterion and Ricci-flat immersions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoDimVerdict:
    is_chern_federer: bool
    branch: str
    gauss_curvature: np.ndarray
    mean_curvature_norm: np.ndarray


def two_dim_criterion(chart: ChartedMap, order: int = 4, tol: float = 1e-4) -> TwoDimVerdict:
    """Surface criterion: constant Gauss curvature with a minimal immersion, or
    Gauss curvature everywhere equal to twice the ambient curvature."""
    if chart.dim != 2:
        raise ValueError("criterion applies to two-dimensional charts only")
    g = chart.geometry(order)
    mask = g.interior_mask(4)
    k_field = 0.5 * g.scalar_curvature
    signs = g.form.embed_signs
    h_norm = np.sqrt(
        np.abs(np.einsum("...A,A,...A->...", g.mean_curvature, signs, g.mean_curvature))
    )
    k = k_field[mask]
    h = h_norm[mask]
    c = g.form.curvature
    k_constant = k.max() - k.min() <= tol * (1.0 + np.abs(k).max())
    minimal = h.max() <= tol
    k_is_2c = np.abs(k - 2.0 * c).max() <= tol * (1.0 + abs(2.0 * c))
    if k_is_2c:
        branch = "gauss curvature equals twice the ambient curvature"
        verdict = True
    elif k_constant and minimal:
        branch = "constant gauss curvature, minimal"
        verdict = True
    else:
        branch = "neither branch satisfied"
        verdict = False
    return TwoDimVerdict(verdict, branch, k_field, h_norm)


@dataclass(frozen=True)
class RicciFlatReport:
    ricci_max: float
    residual_tangent_max: float
    residual_normal_max: float
    is_chern_federer: bool


def ricci_flat_check(chart: ChartedMap, order: int = 4, tol: float = 1e-4) -> RicciFlatReport:
    """For immersions into flat space: measure Ricci flatness and the
    second-order residual; flat domains make both parts vanish."""
    from .jets import second_order_chern_federer

    if chart.ambient.curvature != 0.0:
        raise ValueError("check applies to flat ambient targets")
    g = chart.geometry(order)
    mask = g.interior_mask(4)
    ric = np.abs(g.ricci_operator[mask]).max()
    res = second_order_chern_federer(chart, order)
    t, n = res.max_norms()
    return RicciFlatReport(float(ric), t, n, bool(t <= tol and n <= tol))


# ---------------------------------------------------------------------------
# isoparametric family registry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphericalFamily:
    ident: str
    g: int
    multiplicity_rule: object  # map param -> tuple of g multiplicities, or None to recover
    param: object = None  # integer parameter value for parameterized families
    dimension: int = 0
    interval_low: object = Fraction(0)  # Fraction, or ("surd", add, n) bracket
    include_zero: bool = False
    reference_poly: object = None  # descending integer coefficients or None
    reference_root: object = None  # ("surd", add, n) for add + sqrt(n)
    note: str = ""


def _g2_reference(m, p):
    return [
        p * (p - 1),
        0,
        -(p * (2 * m - p - 1)),
        0,
        (m - p) * (m + p - 1),
        0,
        -((m - p) * (m - p - 1)),
    ]


def _g3_m6_reference():
    x = Poly.x()
    prod = (x**2 - 3) * (3 * x**3 - 3 * x**2 - 9 * x + 1) * (3 * x**3 + 3 * x**2 - 9 * x - 1)
    return [int(c) for c in prod.descending()]


def _g44_reference(m):
    return [1, 0, -4 * (2 * m - 1), 0, 72 * m - 85, 0, -32 * (4 * m * m - 10 * m + 7), 0,
            72 * m - 85, 0, -4 * (2 * m - 1), 0, 1]


def _g45_reference(m):
    return [2 * m - 3, 0, -4 * (5 * m - 9), 0, 2 * (16 * m * m - 62 * m + 63), 0,
            -4 * (5 * m - 9), 0, 2 * m - 3]


def _g46_reference(m):
    return [3, 0, -16 * m, 0, 136 * m - 117, 0, -4 * (64 * m * m - 116 * m + 63), 0,
            136 * m - 117, 0, -16 * m, 0, 3]


SQRT3_LOW = ("surd", 0, 3)
INV_SQRT3_LOW = ("inv_surd", 3)  # 1/sqrt(3)


def spherical_families():
    """The spherical catalog: umbilic spheres, products, and the homogeneous
    families with three, four and six distinct curvatures."""
    fams = []
    for m in range(2, 9):
        fams.append(
            SphericalFamily(
                f"g1(m={m})", 1, lambda m=m: (m,), dimension=m,
                interval_low=Fraction(0), include_zero=True,
                reference_poly=[1, 0, -1],
                note="umbilic spheres; curvature zero (equator) included",
            )
        )
    for m in range(2, 9):
        for p in range(1, m):
            fams.append(
                SphericalFamily(
                    f"g2(m={m},p={p})", 2, lambda m=m, p=p: (p, m - p), dimension=m,
                    reference_poly=_g2_reference(m, p),
                )
            )
    for dim, label in ((3, "M3"), (6, "M6"), (12, "M12"), (24, "M24")):
        mult = dim // 3
        ref_root = SQRT3_LOW if dim != 6 else None
        fams.append(
            SphericalFamily(
                f"g3:{label}", 3, lambda mult=mult: (mult,) * 3, dimension=dim,
                interval_low=INV_SQRT3_LOW,
                reference_poly=_g3_m6_reference() if dim == 6 else None,
                reference_root=("surd", 0, 3) if dim != 6 else None,
            )
        )
    fams.append(
        SphericalFamily(
            "g4:M8", 4, None, dimension=8, interval_low=Fraction(1),
            reference_root=("surd", 1, 2),
        )
    )
    fams.append(
        SphericalFamily(
            "g4:M18", 4, None, dimension=18, interval_low=Fraction(1),
            reference_poly=[3, 0, -40, 0, 223, 0, -692, 0, 223, 0, -40, 0, 3],
        )
    )
    fams.append(
        SphericalFamily(
            "g4:M30", 4, None, dimension=30, interval_low=Fraction(1),
            reference_poly=[12, 0, -111, 0, 488, 0, -1098, 0, 488, 0, -111, 0, 12],
        )
    )
    for m in range(2, 9):
        fams.append(
            SphericalFamily(
                f"g4:M4m-2(m={m})", 4, None, param=m, dimension=4 * m - 2,
                interval_low=Fraction(1), reference_poly=_g44_reference(m),
            )
        )
    for m in range(3, 9):
        fams.append(
            SphericalFamily(
                f"g4:M2m-2(m={m})", 4, None, param=m, dimension=2 * m - 2,
                interval_low=Fraction(1), reference_poly=_g45_reference(m),
            )
        )
    for m in range(2, 9):
        fams.append(
            SphericalFamily(
                f"g4:M8m-2(m={m})", 4, None, param=m, dimension=8 * m - 2,
                interval_low=Fraction(1), reference_poly=_g46_reference(m),
            )
        )
    for dim, label in ((6, "M6"), (12, "M12")):
        fams.append(
            SphericalFamily(
                f"g6:{label}", 6, lambda mult=dim // 6: (mult,) * 6, dimension=dim,
                interval_low=SQRT3_LOW, reference_root=("surd", 2, 3),
            )
        )
    return fams


def interval_low_bracket(spec) -> tuple:
    """Rational bracket (lo, hi) around the lower endpoint of a family's
    curvature interval."""
    if isinstance(spec, Fraction):
        return (spec, spec)
    if spec[0] == "surd":
        return surd_bracket(spec[1], spec[2])
    if spec[0] == "inv_surd":
        lo, hi = sqrt_bracket(spec[1])
        return (1 / hi, 1 / lo)
    raise ValueError(f"unknown interval spec {spec!r}")


def candidate_multiplicities(family: SphericalFamily):
    if family.multiplicity_rule is not None:
        return [tuple(family.multiplicity_rule())]
    # alternating split (a, b, a, b) constrained by the dimension
    half = family.dimension // 2
    return [(a, half - a, a, half - a) for a in range(1, half)]


@dataclass
class ClassificationReport:
    family: str
    kind: str
    derived: ConditionPolynomial
    reference: object
    verdict: str
    roots: object = None
    multiplicities: tuple = ()
    recovered: bool = False
    boundary_factor: object = None
    note: str = ""

    def as_dict(self) -> dict:
        roots = self.roots
        if isinstance(roots, list):
            roots = [r.as_dict() for r in roots]
        return {
            "family": self.family,
            "kind": self.kind,
            "derived": self.derived.as_dict() if self.derived is not None else None,
            "verdict": self.verdict,
            "roots": roots,
            "multiplicities": list(self.multiplicities),
            "recovered": self.recovered,
            "boundary_factor": self.boundary_factor,
            "note": self.note,
        }


def _reference_condition(family: SphericalFamily) -> ConditionPolynomial | None:
    if family.reference_poly is None:
        return None
    return canonical_condition(
        RationalFunction(Poly.from_descending([Fraction(c) for c in family.reference_poly])),
        "CF",
        family.ident,
    )


def _roots_in_range(family: SphericalFamily, cond: ConditionPolynomial):
    roots = isolate_positive_roots(cond, (Fraction(0), "inf"))
    if roots == IDENTICALLY_SATISFIED:
        return roots
    bracket = interval_low_bracket(family.interval_low)
    if bracket[0] == bracket[1]:
        return [r for r in roots if r.low >= bracket[0]]
    return separate_from(roots, cond, bracket)


def _polynomials_compatible(derived: ConditionPolynomial, reference: ConditionPolynomial,
                            family: SphericalFamily):
    """Exact equality, or reference = derived * F with every root of F outside
    the family's open curvature interval.  Returns (verdict, factor)."""
    if derived.coefficients == reference.coefficients:
        return True, None
    dp, rp = derived.poly(), reference.poly()
    if rp.degree < dp.degree:
        return False, None
    quot, rem = rp.divmod(dp)
    if not rem.is_zero():
        return False, None
    extra = isolate_roots(square_free(quot), Fraction(0), "inf")
    bracket = interval_low_bracket(family.interval_low)
    for a, b in extra:
        if b > bracket[0]:  # root possibly inside the interval
            if a > bracket[1]:
                return False, None
            # overlapping the endpoint bracket: treat as outside only if the
            # enclosure is clearly below the upper endpoint bound
            if b > bracket[1]:
                return False, None
    coeffs, _ = integer_primitive(quot)
    return True, list(coeffs)


def classify_spherical_family(family: SphericalFamily, kind: str = "CF") -> ClassificationReport:
    reference = _reference_condition(family)
    last = None
    for mults in candidate_multiplicities(family):
        derived = condition_polynomial(family.g, mults, kind, family.ident)
        roots = _roots_in_range(family, derived)
        recovered = family.multiplicity_rule is None
        if reference is not None:
            ok, factor = _polynomials_compatible(derived, reference, family)
            if ok:
                verdict = "match"
                note = family.note
                if factor is not None:
                    note = (note + " " if note else "") + (
                        "reference carries an extra factor with no roots in the range"
                    )
                return ClassificationReport(
                    family.ident, kind, derived, list(reference.coefficients), verdict,
                    roots, mults, recovered, factor, note,
                )
            last = ClassificationReport(
                family.ident, kind, derived, list(reference.coefficients), "mismatch",
                roots, mults, recovered, None, family.note,
            )
        elif family.reference_root is not None:
            _, add, n = family.reference_root
            minpoly = Poly.x() ** 2 - 2 * add * Poly.x() + (add * add - n)
            divisible = (derived.poly() % minpoly).is_zero()
            single = isinstance(roots, list) and len(roots) == 1
            in_rt = single and roots[0].contains(*surd_bracket(add, n))
            if divisible and single and in_rt:
                return ClassificationReport(
                    family.ident, kind, derived, f"root {add}+sqrt({n})", "match",
                    roots, mults, recovered, None, family.note,
                )
            last = ClassificationReport(
                family.ident, kind, derived, f"root {add}+sqrt({n})", "mismatch",
                roots, mults, recovered, None, family.note,
            )
        else:
            return ClassificationReport(
                family.ident, kind, derived, None, "derived", roots, mults, recovered,
                None, family.note,
            )
    return last


# -- flat and hyperbolic ambient spectra --------------------------------------


def euclidean_product_spectrum(k: int, m: int, radius=Fraction(1)) -> PrincipalSpectrum:
    """Sphere-cylinder product in flat space: curvature 1/radius with
    multiplicity k, zero with multiplicity m - k."""
    if not 0 <= k <= m:
        raise ValueError("need 0 <= k <= m")
    entries = []
    if k:
        entries.append(SpectrumEntry(k, value=Fraction(1) / Fraction(radius)))
    if m - k:
        entries.append(SpectrumEntry(m - k, value=Fraction(0)))
    return PrincipalSpectrum(tuple(entries), Fraction(0))


def euclidean_umbilic_spectrum(m: int, radius=Fraction(1)) -> PrincipalSpectrum:
    return PrincipalSpectrum(
        (SpectrumEntry(m, value=Fraction(1) / Fraction(radius)),), Fraction(0)
    )


def hyperbolic_umbilic_family(m: int) -> ConditionPolynomial:
    """Umbilic hypersurfaces of the hyperbolic space: condition polynomial in
    the common curvature value (covers geodesic spheres, horospheres and
    equidistant hypersurfaces)."""
    x = RationalFunction(Poly.x())
    spectrum = PrincipalSpectrum((SpectrumEntry(m, value=x),), Fraction(-1))
    return canonical_condition(condition_value(spectrum, "CF"), "CF", f"hyperbolic umbilic m={m}")


def hyperbolic_product_polynomial(k: int, m: int) -> ConditionPolynomial:
    """Products of a sphere and a hyperbolic factor: curvatures lambda (k-fold)
    and 1/lambda (m-k fold) with lambda = coth(t) > 1."""
    x = RationalFunction(Poly.x())
    entries = (SpectrumEntry(k, value=x), SpectrumEntry(m - k, value=1 / x))
    spectrum = PrincipalSpectrum(entries, Fraction(-1))
    return canonical_condition(condition_value(spectrum, "CF"), "CF", f"hyperbolic product k={k},m={m}")


def classify_euclidean(m_max: int = 8):
    """Flat-space families: the cylinder family satisfies the condition for
    every radius, umbilic spheres never do (beyond the geodesic hyperplane)."""
    reports = []
    x = RationalFunction(Poly.x())
    for m in range(2, m_max + 1):
        # product with curvature x of multiplicity k
        for k in (1, 2, m):
            entries = [SpectrumEntry(k, value=x)]
            if m - k:
                entries.append(SpectrumEntry(m - k, value=Fraction(0)))
            spectrum = PrincipalSpectrum(tuple(entries), Fraction(0))
            cond = canonical_condition(condition_value(spectrum, "CF"), "CF")
            roots = isolate_positive_roots(cond)
            if k == 1:
                verdict = "match" if cond.identically_zero else "mismatch"
                expect = "identically satisfied (right circular cylinder)"
            else:
                nontrivial = cond.identically_zero or (
                    isinstance(roots, list) and len(roots) > 0
                )
                verdict = "mismatch" if nontrivial else "match"
                expect = "no admissible curvature (not a CF family)"
            reports.append(
                ClassificationReport(
                    f"euclidean product k={k} (m={m})", "CF", cond, expect, verdict, roots,
                    (k, m - k) if m - k else (k,),
                )
            )
    return reports


def classify_hyperbolic(m_max: int = 8):
    """Hyperbolic families: only the totally geodesic hypersurface satisfies
    the condition; umbilic and product families have no admissible curvature."""
    reports = []
    one = Fraction(1)
    for m in range(2, m_max + 1):
        cond = hyperbolic_umbilic_family(m)
        roots = isolate_positive_roots(cond)
        # lambda = 0 is the totally geodesic case; it must be the only solution
        geodesic_only = (
            not cond.identically_zero
            and cond.zero_root_multiplicity >= 1
            and isinstance(roots, list)
            and len(roots) == 0
        )
        reports.append(
            ClassificationReport(
                f"hyperbolic umbilic (m={m})", "CF", cond,
                "only the totally geodesic solution", "match" if geodesic_only else "mismatch",
                roots, (m,),
            )
        )
        for k in range(1, m):
            cond = hyperbolic_product_polynomial(k, m)
            roots = isolate_positive_roots(cond, (one, "inf"))
            empty = isinstance(roots, list) and len(roots) == 0
            reports.append(
                ClassificationReport(
                    f"hyperbolic product k={k} (m={m})", "CF", cond,
                    "no admissible curvature", "match" if empty and not cond.identically_zero else "mismatch",
                    roots, (k, m - k),
                )
            )
    return reports


def classification_suite(kind: str = "CF"):
    """Full catalog sweep; every entry must come back with verdict 'match'."""
    reports = [classify_spherical_family(f, kind) for f in spherical_families()]
    reports.extend(classify_euclidean())
    reports.extend(classify_hyperbolic())
    return reports


# -- chart/spectrum consistency -------------------------------------------------


def spectrum_chart_pairs():
    """Families carrying both a chart and an exact spectrum, with the substitution
    giving the leading curvature from the chart parameter."""

    def g1_curvature(r):
        return np.sqrt(1.0 - r * r) / r

    return [
        {
            "name": "g1 small sphere",
            "chart": lambda r, grid: families.small_sphere_in_sphere(r, grid),
            "g": 1,
            "multiplicities": (2,),
            "leading": g1_curvature,
            "params": [0.6, 1.0 / np.sqrt(2.0), 0.9],
        },
        {
            "name": "g2 product torus",
            "chart": lambda r, grid: families.clifford_torus(r, grid),
            "g": 2,
            "multiplicities": (1, 1),
            "leading": g1_curvature,
            "params": [0.5, 1.0 / np.sqrt(2.0), 0.8],
        },
        {
            "name": "g2 circle-sphere product",
            "chart": lambda r, grid: families.clifford_s1xs2(r, grid),
            "g": 2,
            "multiplicities": (1, 2),
            "leading": g1_curvature,
            "params": [0.6],
        },
    ]
