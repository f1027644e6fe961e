"""Built-in closed-form chart families.

Each builder returns a ChartedMap on the requested grid.  Unit normals of the
codimension-one families are oriented so that the signed principal curvatures
match the cotangent conventions of the spherical catalog (for product and
small-sphere families the normal points toward decreasing radius of the
leading ambient block; for spheres in Euclidean space it points inward).
"""

from __future__ import annotations

import numpy as np

from .charts import ChartedMap, SpaceForm

TWO_PI = 2.0 * np.pi


def clifford_torus(r1: float, grid: int = 64) -> ChartedMap:
    """Product of two circles in the unit three-sphere, arc-length chart."""
    if not 0.0 < r1 < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    r2 = np.sqrt(1.0 - r1 * r1)

    def mapper(u):
        t1 = u[..., 0] / r1
        t2 = u[..., 1] / r2
        return np.stack(
            [r1 * np.cos(t1), r1 * np.sin(t1), r2 * np.cos(t2), r2 * np.sin(t2)], axis=-1
        )

    return ChartedMap(
        ambient=SpaceForm(3, 1.0),
        periods=(TWO_PI * r1, TWO_PI * r2),
        shape=(grid, grid),
        mapper=mapper,
        normal_sign=1.0,
        name=f"clifford(r1={r1:g})",
    )


def clifford_s1xs2(r1: float, grid: int = 32, band: float = 0.5) -> ChartedMap:
    """Product of a circle and a two-sphere in the unit four-sphere."""
    if not 0.0 < r1 < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    r2 = np.sqrt(1.0 - r1 * r1)

    def mapper(u):
        t = u[..., 0] / r1
        th, ph = u[..., 1], u[..., 2]
        return np.stack(
            [
                r1 * np.cos(t),
                r1 * np.sin(t),
                r2 * np.sin(th) * np.cos(ph),
                r2 * np.sin(th) * np.sin(ph),
                r2 * np.cos(th),
            ],
            axis=-1,
        )

    return ChartedMap(
        ambient=SpaceForm(4, 1.0),
        periods=(TWO_PI * r1, np.pi - 2 * band, TWO_PI),
        shape=(grid, grid, grid),
        mapper=mapper,
        periodic=(True, False, True),
        origins=(0.0, band, 0.0),
        normal_sign=1.0,
        name=f"clifford_s1xs2(r1={r1:g})",
    )


def small_sphere_in_sphere(r: float, grid: int = 64, band: float = 0.5) -> ChartedMap:
    """Geodesic sphere of radius sin(t) = r inside the unit three-sphere.

    The polar band (theta within `band` of the poles) is excluded via an open
    axis; the azimuthal axis stays periodic.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError("radius must lie in (0, 1]")
    h = np.sqrt(max(1.0 - r * r, 0.0))

    def mapper(u):
        th, ph = u[..., 0], u[..., 1]
        sin_th = np.sin(th)
        return np.stack(
            [
                r * sin_th * np.cos(ph),
                r * sin_th * np.sin(ph),
                r * np.cos(th),
                h * np.ones_like(th),
            ],
            axis=-1,
        )

    return ChartedMap(
        ambient=SpaceForm(3, 1.0),
        periods=(np.pi - 2 * band, TWO_PI),
        shape=(grid, grid),
        mapper=mapper,
        periodic=(False, True),
        origins=(band, 0.0),
        normal_sign=-1.0,
        name=f"small_sphere(r={r:g})",
    )


def round_sphere(r: float = 1.0, grid: int = 64, band: float = 0.5) -> ChartedMap:
    """Sphere of radius r in Euclidean three-space, inward normal."""

    def mapper(u):
        th, ph = u[..., 0], u[..., 1]
        return np.stack(
            [
                r * np.sin(th) * np.cos(ph),
                r * np.sin(th) * np.sin(ph),
                r * np.cos(th),
            ],
            axis=-1,
        )

    return ChartedMap(
        ambient=SpaceForm(3, 0.0),
        periods=(np.pi - 2 * band, TWO_PI),
        shape=(grid, grid),
        mapper=mapper,
        periodic=(False, True),
        origins=(band, 0.0),
        normal_sign=-1.0,
        name=f"round_sphere(r={r:g})",
    )


def torus_of_revolution(
    big: float = 2.0, small: float = 0.5, grid: int = 64, wobble: float = 0.0, seed: int = 0
) -> ChartedMap:
    """Torus of revolution in Euclidean three-space, optionally with a smooth
    seeded perturbation of the tube radius."""
    rng = np.random.default_rng(seed)
    coeffs = wobble * rng.uniform(-1.0, 1.0, size=3)

    def tube(u, v):
        if wobble == 0.0:
            return small * np.ones_like(u)
        return small * (
            1.0
            + coeffs[0] * np.cos(u) * np.cos(v)
            + coeffs[1] * np.sin(u + 2 * v)
            + coeffs[2] * np.cos(2 * u)
        )

    def mapper(w):
        u, v = w[..., 0], w[..., 1]
        rho = tube(u, v)
        return np.stack(
            [(big + rho * np.cos(v)) * np.cos(u), (big + rho * np.cos(v)) * np.sin(u), rho * np.sin(v)],
            axis=-1,
        )

    return ChartedMap(
        ambient=SpaceForm(3, 0.0),
        periods=(TWO_PI, TWO_PI),
        shape=(grid, grid),
        mapper=mapper,
        name=f"torus_revolution(R={big:g},a={small:g},w={wobble:g})",
    )


def cylinder_patch(r: float = 1.0, grid: int = 64) -> ChartedMap:
    """Arc-length chart of a circular cylinder patch; flat induced metric."""
    lin = np.zeros((3, 2))
    lin[2, 1] = 1.0

    def mapper(u):
        t = u[..., 0] / r
        return np.stack([r * np.cos(t), r * np.sin(t), np.zeros_like(t)], axis=-1)

    return ChartedMap(
        ambient=SpaceForm(3, 0.0),
        periods=(TWO_PI * r, 2.0),
        shape=(grid, grid),
        mapper=mapper,
        linear=lin,
        name=f"cylinder(r={r:g})",
    )


def plane_patch(grid: int = 32) -> ChartedMap:
    """Totally geodesic plane patch in Euclidean three-space."""
    lin = np.zeros((3, 2))
    lin[0, 0] = 1.0
    lin[1, 1] = 1.0

    def mapper(u):
        return np.zeros(u.shape[:-1] + (3,))

    return ChartedMap(
        ambient=SpaceForm(3, 0.0),
        periods=(1.0, 1.0),
        shape=(grid, grid),
        mapper=mapper,
        linear=lin,
        name="plane",
    )


def flat_torus_identity(grid: int = 32, index: int = 0) -> ChartedMap:
    """Identity map of a flat two-torus (optionally pseudo-Riemannian)."""
    lin = np.eye(2)

    def mapper(u):
        return np.zeros(u.shape[:-1] + (2,))

    return ChartedMap(
        ambient=SpaceForm(2, 0.0, index=index),
        periods=(TWO_PI, TWO_PI),
        shape=(grid, grid),
        mapper=mapper,
        linear=lin,
        metric="induced",
        name="flat_identity",
    )


def flat4_in_e5(grid: int = 16, seed: int = 1, amplitude: float = 0.05) -> ChartedMap:
    """Four-torus test map into Euclidean five-space with an explicit metric.

    The map has a full-rank secular part plus a periodic ripple, and the
    explicit metric is a periodic positive-definite perturbation of the flat
    one; used for the homothety checks of dimension-four energies.
    """
    rng = np.random.default_rng(seed)
    lin = np.linalg.qr(rng.standard_normal((5, 4)))[0]
    waves = rng.integers(1, 3, size=(5, 4))
    phases = rng.uniform(0, TWO_PI, size=5)

    def mapper(u):
        comps = []
        for a in range(5):
            arg = sum(waves[a, i] * u[..., i] for i in range(4)) + phases[a]
            comps.append(amplitude * np.sin(arg))
        return np.stack(comps, axis=-1)

    sym_waves = rng.integers(1, 3, size=(4, 4))

    def metric(u):
        base = np.broadcast_to(np.eye(4), u.shape[:-1] + (4, 4)).copy()
        for i in range(4):
            for j in range(i, 4):
                ripple = 0.08 * np.cos(sym_waves[i, j] * u[..., i] + u[..., j])
                base[..., i, j] += ripple
                base[..., j, i] += ripple * (i != j)
        return base

    return ChartedMap(
        ambient=SpaceForm(5, 0.0),
        periods=(TWO_PI,) * 4,
        shape=(grid,) * 4,
        mapper=mapper,
        linear=lin,
        metric=metric,
        name="flat4_in_e5",
    )


def _fourier_loop(rng, harmonics: int, dim: int):
    coeffs = rng.standard_normal((2, harmonics, dim)) / np.arange(1, harmonics + 1).reshape(
        1, -1, 1
    ) ** 2
    base = rng.standard_normal(dim)

    def loop(t):
        out = np.broadcast_to(base, t.shape + (dim,)).copy()
        for k in range(harmonics):
            out = out + np.cos((k + 1) * t)[..., None] * coeffs[0, k]
            out = out + np.sin((k + 1) * t)[..., None] * coeffs[1, k]
        return out

    return loop


def curve_in_sphere(seed: int = 0, grid: int = 256, harmonics: int = 3) -> ChartedMap:
    """Random smooth closed curve on the unit two-sphere."""
    rng = np.random.default_rng(seed)
    loop = _fourier_loop(rng, harmonics, 3)

    def mapper(u):
        raw = loop(u[..., 0])
        raw = raw + np.array([3.0, 0.0, 0.0])  # keep away from the origin
        return raw / np.linalg.norm(raw, axis=-1, keepdims=True)

    return ChartedMap(
        ambient=SpaceForm(2, 1.0),
        periods=(TWO_PI,),
        shape=(grid,),
        mapper=mapper,
        name=f"curve_s2(seed={seed})",
    )


def curve_in_euclidean(seed: int = 0, grid: int = 256, harmonics: int = 3) -> ChartedMap:
    """Random smooth closed curve in Euclidean three-space."""
    rng = np.random.default_rng(seed)
    loop = _fourier_loop(rng, harmonics, 3)

    def mapper(u):
        return loop(u[..., 0])

    return ChartedMap(
        ambient=SpaceForm(3, 0.0),
        periods=(TWO_PI,),
        shape=(grid,),
        mapper=mapper,
        name=f"curve_e3(seed={seed})",
    )


def curve_in_hyperbolic(seed: int = 0, grid: int = 256, harmonics: int = 2) -> ChartedMap:
    """Random smooth closed curve on the hyperbolic plane (hyperboloid model)."""
    rng = np.random.default_rng(seed)
    loop = _fourier_loop(rng, harmonics, 2)

    def mapper(u):
        xy = 0.5 * loop(u[..., 0])
        x0 = np.sqrt(1.0 + (xy**2).sum(axis=-1, keepdims=True))
        return np.concatenate([x0, xy], axis=-1)

    return ChartedMap(
        ambient=SpaceForm(2, -1.0),
        periods=(TWO_PI,),
        shape=(grid,),
        mapper=mapper,
        name=f"curve_h2(seed={seed})",
    )


CHART_FAMILIES = {
    "clifford": clifford_torus,
    "clifford_s1xs2": clifford_s1xs2,
    "small_sphere": small_sphere_in_sphere,
    "round_sphere": round_sphere,
    "torus_revolution": torus_of_revolution,
    "cylinder": cylinder_patch,
    "plane": plane_patch,
    "flat_identity": flat_torus_identity,
    "flat4_in_e5": flat4_in_e5,
    "curve_sphere": curve_in_sphere,
    "curve_euclidean": curve_in_euclidean,
    "curve_hyperbolic": curve_in_hyperbolic,
}


def build_chart(family: str, grid=None, **params) -> ChartedMap:
    if family not in CHART_FAMILIES:
        raise KeyError(f"unknown chart family '{family}'")
    if grid is not None:
        params["grid"] = grid
    return CHART_FAMILIES[family](**params)
