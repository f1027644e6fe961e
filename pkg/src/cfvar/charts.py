"""Space-form models and charted maps on periodic grids.

A chart samples a smooth map from a rectangular box into a constant-curvature
ambient model and differentiates it with central stencils (periodic wrap on
closed axes).  Sphere and hyperboloid targets are handled extrinsically: the
model sits inside a flat (pseudo-)Euclidean space and covariant derivatives
are tangential projections of flat ones, which avoids chart singularities of
intrinsic coordinates.

Maps may carry a linear secular part phi(u) = L u + psi(u) with psi periodic;
stencils see only psi, so identity-type maps and cylinder patches stay exact.
Axes marked non-periodic are differentiated with the same wrapped stencils and
a boundary margin is excluded from every report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

CONDITION_LIMIT = 1e8

#: central first-derivative stencils, by accuracy order: {shift: coefficient}
_D1 = {
    2: {-1: -0.5, 1: 0.5},
    4: {-2: 1.0 / 12.0, -1: -2.0 / 3.0, 1: 2.0 / 3.0, 2: -1.0 / 12.0},
}


class SingularChartError(Exception):
    """Induced metric degenerate beyond the conditioning limit."""


class UnsupportedModeError(Exception):
    """Operation not available for this chart's mode or codimension."""


@dataclass(frozen=True)
class SpaceForm:
    """Constant-curvature ambient model.

    curvature 0 is flat pseudo-Euclidean space with the given index; positive
    curvature is the round sphere of radius 1/sqrt(c) in Euclidean space one
    dimension up; negative curvature is the hyperboloid sheet
    <x, x> = -1/|c|, x_1 > 0 in Minkowski space one dimension up.
    """

    dim: int
    curvature: float = 0.0
    index: int = 0

    def __post_init__(self):
        if self.curvature != 0.0 and self.index != 0:
            raise ValueError("curved models are Riemannian (index 0)")

    @property
    def embed_dim(self) -> int:
        return self.dim if self.curvature == 0.0 else self.dim + 1

    @property
    def radius(self) -> float:
        if self.curvature == 0.0:
            raise ValueError("flat model has no radius")
        return 1.0 / np.sqrt(abs(self.curvature))

    @property
    def embed_signs(self) -> np.ndarray:
        s = np.ones(self.embed_dim)
        if self.curvature < 0:
            s[0] = -1.0
        elif self.curvature == 0.0:
            s[: self.index] = -1.0
        return s

    def ambient_dot(self, v, w):
        return np.einsum("...A,A,...A->...", v, self.embed_signs, w)

    def project(self, points, vectors):
        """Tangential projection of ambient vectors at model points."""
        if self.curvature == 0.0:
            return vectors
        r2 = self.radius**2
        coef = self.ambient_dot(vectors, points) / r2
        if self.curvature > 0:
            return vectors - coef[..., None] * points
        return vectors + coef[..., None] * points

    def check_points(self, points, tol=1e-8):
        if self.curvature == 0.0:
            return
        r2 = self.radius**2
        target = r2 if self.curvature > 0 else -r2
        vals = self.ambient_dot(points, points)
        if np.abs(vals - target).max() > tol * (1.0 + abs(target)):
            raise ValueError("sample points do not lie on the model")


@dataclass(frozen=True)
class ChartedMap:
    """Map from a periodic box into a space form, sampled on a uniform grid."""

    ambient: SpaceForm
    periods: tuple
    shape: tuple
    mapper: object = None  # callable (..., m) -> (..., embed_dim), periodic part
    linear: object = None  # (embed_dim, m) secular part, flat ambient only
    metric: object = "induced"  # "induced", callable, or sampled array
    periodic: tuple = None
    origins: tuple = None
    samples: object = None  # precomputed periodic-part samples
    normal_sign: float = 1.0
    name: str = ""

    def __post_init__(self):
        m = len(self.shape)
        if len(self.periods) != m:
            raise ValueError("periods and shape must have equal length")
        object.__setattr__(self, "periods", tuple(float(p) for p in self.periods))
        object.__setattr__(self, "shape", tuple(int(n) for n in self.shape))
        if self.periodic is None:
            object.__setattr__(self, "periodic", (True,) * m)
        if self.origins is None:
            object.__setattr__(self, "origins", (0.0,) * m)
        if self.linear is not None:
            if self.ambient.curvature != 0.0:
                raise ValueError("linear secular parts require a flat ambient")
            lin = np.asarray(self.linear, dtype=float)
            if lin.shape != (self.ambient.embed_dim, m):
                raise ValueError("linear part must have shape (embed_dim, m)")
            object.__setattr__(self, "linear", lin)
        if self.mapper is None and self.samples is None:
            raise ValueError("either a mapper or samples are required")

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def steps(self) -> tuple:
        return tuple(p / n for p, n in zip(self.periods, self.shape))

    def axes(self):
        return [
            o + np.arange(n) * (p / n)
            for o, p, n in zip(self.origins, self.periods, self.shape)
        ]

    def grid_points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack(mesh, axis=-1)

    def periodic_samples(self) -> np.ndarray:
        if self.samples is not None:
            arr = np.asarray(self.samples, dtype=float)
            want = self.shape + (self.ambient.embed_dim,)
            if arr.shape != want:
                raise ValueError(f"samples must have shape {want}, got {arr.shape}")
            return arr
        return np.asarray(self.mapper(self.grid_points()), dtype=float)

    def positions(self) -> np.ndarray:
        pos = self.periodic_samples().copy()
        if self.linear is not None:
            pos += self.grid_points() @ self.linear.T
        return pos

    def with_grid(self, shape) -> "ChartedMap":
        if self.mapper is None:
            raise UnsupportedModeError("sampled chart cannot be re-gridded")
        return ChartedMap(
            ambient=self.ambient,
            periods=self.periods,
            shape=tuple(shape),
            mapper=self.mapper,
            linear=self.linear,
            metric=self.metric if not isinstance(self.metric, np.ndarray) else "induced",
            periodic=self.periodic,
            origins=self.origins,
            normal_sign=self.normal_sign,
            name=self.name,
        )

    def geometry(self, order: int = 4) -> "GridGeometry":
        cache = _GEOMETRY_CACHE.setdefault(id(self), {})
        # hold a reference so id() stays valid for the cache lifetime
        cache["chart"] = self
        if order not in cache:
            cache[order] = GridGeometry(self, order)
        return cache[order]


_GEOMETRY_CACHE: dict = {}


def compose_isometry(chart: ChartedMap, rotation, shift=None, name=None) -> ChartedMap:
    """Chart for (rotation . phi + shift); rotation must preserve the model."""
    rot = np.asarray(rotation, dtype=float)
    form = chart.ambient
    eta = np.diag(form.embed_signs)
    if np.abs(rot.T @ eta @ rot - eta).max() > 1e-10:
        raise ValueError("rotation does not preserve the ambient metric")
    if shift is not None and form.curvature != 0.0:
        raise ValueError("translations only exist in the flat model")
    shift = np.zeros(form.embed_dim) if shift is None else np.asarray(shift, dtype=float)
    base = chart.mapper

    def mapper(u):
        return np.asarray(base(u)) @ rot.T + shift

    lin = None if chart.linear is None else rot @ chart.linear
    return ChartedMap(
        ambient=form,
        periods=chart.periods,
        shape=chart.shape,
        mapper=mapper,
        linear=lin,
        metric=chart.metric,
        periodic=chart.periodic,
        origins=chart.origins,
        normal_sign=chart.normal_sign,
        name=name or (chart.name + "+isometry"),
    )


def reparametrized(chart: ChartedMap, scales, name=None) -> ChartedMap:
    """Diagonal reparametrization u -> s*u; same geometric sample points."""
    scales = tuple(float(s) for s in scales)
    base = chart.mapper

    def mapper(v):
        return base(v * np.asarray(scales))

    lin = None if chart.linear is None else chart.linear * np.asarray(scales)
    return ChartedMap(
        ambient=chart.ambient,
        periods=tuple(p / s for p, s in zip(chart.periods, scales)),
        shape=chart.shape,
        mapper=mapper,
        linear=lin,
        metric=chart.metric,
        periodic=chart.periodic,
        origins=tuple(o / s for o, s in zip(chart.origins, scales)),
        normal_sign=chart.normal_sign,
        name=name or (chart.name + "+reparam"),
    )


class GridGeometry:
    """Metric, connection and curvature data of a chart on its grid.

    Array layout: leading axes are the grid, domain tensor slots follow, the
    ambient component (when present) comes last.
    """

    def __init__(self, chart: ChartedMap, order: int = 4):
        if order not in _D1:
            raise ValueError("stencil order must be 2 or 4")
        self.chart = chart
        self.order = order
        self.radius = order // 2
        self.form = chart.ambient
        self.m = chart.dim
        self.steps = chart.steps
        self.grid = chart.grid_points()
        self.psi = chart.periodic_samples()
        self.positions = self.psi if chart.linear is None else self.psi + self.grid @ chart.linear.T
        if self.form.curvature != 0.0:
            self.form.check_points(self.positions)
        self._build_first_order()

    # -- differentiation ------------------------------------------------------

    def deriv(self, values: np.ndarray, axis: int) -> np.ndarray:
        out = np.zeros_like(values)
        h = self.steps[axis]
        for shift, c in _D1[self.order].items():
            out += c * np.roll(values, -shift, axis=axis)
        return out / h

    def project(self, vectors: np.ndarray) -> np.ndarray:
        pos = self.positions
        extra = vectors.ndim - pos.ndim
        if extra:
            shape = pos.shape[:-1] + (1,) * extra + (pos.shape[-1],)
            pos = pos.reshape(shape)
        return self.form.project(pos, vectors)

    def covariant_ambient_deriv(self, vectors: np.ndarray, axis: int) -> np.ndarray:
        """Pullback-connection derivative of an ambient vector field along phi."""
        return self.project(self.deriv(vectors, axis))

    # -- first-order data -------------------------------------------------------

    def _build_first_order(self):
        chart = self.chart
        m = self.m
        dcols = [self.deriv(self.psi, a) for a in range(m)]
        dphi = np.stack(dcols, axis=-2)  # [..., i, A]
        if chart.linear is not None:
            dphi = dphi + chart.linear.T
        self.dphi = dphi
        signs = self.form.embed_signs
        self.ip = np.einsum("...iA,A,...jA->...ij", dphi, signs, dphi)
        if isinstance(chart.metric, str) and chart.metric == "induced":
            self.g = self.ip.copy()
            self.explicit_metric = False
        else:
            self.explicit_metric = True
            if callable(chart.metric):
                self.g = np.asarray(chart.metric(self.grid), dtype=float)
            else:
                self.g = np.asarray(chart.metric, dtype=float)
            if self.g.shape != chart.shape + (m, m):
                raise ValueError("explicit metric has wrong shape")
        cond = np.linalg.cond(self.g)
        if cond[self.interior_mask()].max() > CONDITION_LIMIT:
            raise SingularChartError(
                f"metric condition number {cond.max():.3g} exceeds {CONDITION_LIMIT:.0e}"
            )
        self.g_inv = np.linalg.inv(self.g)
        det = np.linalg.det(self.g)
        self.sqrt_det = np.sqrt(np.abs(det))
        dg = np.stack([self.deriv(self.g, a) for a in range(m)], axis=-3)  # [..., k, i, j]
        self.gamma = 0.5 * (
            np.einsum("...kl,...ijl->...kij", self.g_inv, dg)
            + np.einsum("...kl,...jil->...kij", self.g_inv, dg)
            - np.einsum("...kl,...lij->...kij", self.g_inv, dg)
        )
        dd = np.stack(
            [self.covariant_ambient_deriv(dphi, i) for i in range(m)], axis=-3
        )  # [..., i, j, A]
        corr = np.einsum("...kij,...kA->...ijA", self.gamma, dphi)
        self.sff_raw = dd - corr
        self.sff = 0.5 * (self.sff_raw + np.swapaxes(self.sff_raw, -3, -2))
        self.tension = np.einsum("...ij,...ijA->...A", self.g_inv, self.sff)
        self.mean_curvature = self.tension / m

    # -- masks ------------------------------------------------------------------

    def interior_mask(self, stages: int = 4) -> np.ndarray:
        mask = np.ones(self.chart.shape, dtype=bool)
        width = stages * self.radius
        for axis, per in enumerate(self.chart.periodic):
            if per:
                continue
            n = self.chart.shape[axis]
            if 2 * width >= n:
                raise SingularChartError("open axis too short for the stencil margin")
            sl = [slice(None)] * self.m
            sl[axis] = slice(0, width)
            mask[tuple(sl)] = False
            sl[axis] = slice(n - width, n)
            mask[tuple(sl)] = False
        return mask

    # -- curvature of the domain --------------------------------------------------

    @cached_property
    def ricci(self) -> np.ndarray:
        """Ricci tensor Ric[j,k] = trace_i of R(e_i, .)., via contracted Christoffel data."""
        m = self.m
        gamma = self.gamma
        term1 = np.zeros(self.chart.shape + (m, m))
        for i in range(m):
            term1 += self.deriv(gamma[..., i, :, :], i)
        contracted = np.einsum("...iik->...k", gamma)
        term2 = np.stack([self.deriv(contracted, j) for j in range(m)], axis=-2)  # [..., j, k]
        term3 = np.einsum("...m,...mjk->...jk", contracted, gamma)
        term4 = np.einsum("...ijm,...mik->...jk", gamma, gamma)
        return term1 - term2 + term3 - term4

    @cached_property
    def ricci_operator(self) -> np.ndarray:
        """Q[i, j] with Q(d_j) = Q[i, j] d_i, raised with the domain metric."""
        return np.einsum("...ik,...kj->...ij", self.g_inv, self.ricci)

    @cached_property
    def scalar_curvature(self) -> np.ndarray:
        return np.einsum("...jk,...jk->...", self.g_inv, self.ricci)

    @cached_property
    def riemann(self) -> np.ndarray:
        """Full tensor riem[i,j,k,l]: component l of R(d_i, d_j) d_k."""
        m = self.m
        dgamma = np.stack([self.deriv(self.gamma, a) for a in range(m)], axis=-4)
        riem = (
            np.einsum("...iljk->...ijkl", dgamma)
            - np.einsum("...jlik->...ijkl", dgamma)
            + np.einsum("...lim,...mjk->...ijkl", self.gamma, self.gamma)
            - np.einsum("...ljm,...mik->...ijkl", self.gamma, self.gamma)
        )
        return riem

    @cached_property
    def covariant_riemann(self) -> np.ndarray:
        """cov[a,i,j,k,l]: component l of (nabla_a R)(d_i, d_j) d_k."""
        m = self.m
        riem = self.riemann
        out = np.stack([self.deriv(riem, a) for a in range(m)], axis=-5)
        out = out + np.einsum("...lam,...ijkm->...aijkl", self.gamma, riem)
        out = out - np.einsum("...mai,...mjkl->...aijkl", self.gamma, riem)
        out = out - np.einsum("...maj,...imkl->...aijkl", self.gamma, riem)
        out = out - np.einsum("...mak,...ijml->...aijkl", self.gamma, riem)
        return out

    # -- frames and hypersurface data ----------------------------------------------

    @cached_property
    def frames(self) -> np.ndarray:
        """E[..., i, a]: coordinate coefficients of a g-orthonormal frame.

        Riemannian metrics use the (batched) Cholesky factor; explicit metrics
        with negative directions fall back to a per-point pivoted reduction
        with negative-norm directions ordered first.
        """
        try:
            chol = np.linalg.cholesky(self.g)
            return np.swapaxes(np.linalg.inv(chol), -1, -2)
        except np.linalg.LinAlgError:
            flat_g = self.g.reshape(-1, self.m, self.m)
            frames = np.stack([_pseudo_frame(gp) for gp in flat_g])
            return frames.reshape(self.g.shape)

    @cached_property
    def frame_signs(self) -> np.ndarray:
        e = np.einsum("...ia,...ij,...jb->...ab", self.frames, self.g, self.frames)
        return np.round(np.einsum("...aa->...a", e))

    @cached_property
    def codimension(self) -> int:
        return self.form.dim - self.m

    @cached_property
    def unit_normal(self) -> np.ndarray:
        """Oriented unit normal of a codimension-one immersion inside the model."""
        if self.codimension != 1:
            raise UnsupportedModeError("unit normal requires codimension one")
        if self.form.curvature < 0:
            raise UnsupportedModeError("hyperbolic hypersurface normals not supported")
        rows = [self.dphi[..., i, :] for i in range(self.m)]
        if self.form.curvature > 0:
            rows = [self.positions / self.form.radius] + rows
        mat = np.stack(rows, axis=-2)  # [..., D-1, D]
        d = mat.shape[-1]
        comps = []
        for a in range(d):
            cols = [c for c in range(d) if c != a]
            comps.append(((-1.0) ** a) * np.linalg.det(mat[..., :, cols]))
        nu = np.stack(comps, axis=-1)
        norm = np.linalg.norm(nu, axis=-1, keepdims=True)
        if norm[self.interior_mask(1)].min() < 1e-12:
            raise SingularChartError("degenerate tangent span for normal computation")
        return self.chart.normal_sign * nu / norm

    @cached_property
    def sff_frame(self) -> np.ndarray:
        e = self.frames
        return np.einsum("...ia,...jb,...ijA->...abA", e, e, self.sff)

    @cached_property
    def shape_operator(self) -> np.ndarray:
        """Matrix of the normal shape operator in the orthonormal tangent frame."""
        nu = self.unit_normal
        signs = self.form.embed_signs
        return np.einsum("...abA,A,...A->...ab", self.sff_frame, signs, nu)

    @cached_property
    def principal_curvatures(self) -> np.ndarray:
        """Eigenvalues of the shape operator, sorted descending (Riemannian only)."""
        vals = np.linalg.eigvalsh(self.shape_operator)
        return vals[..., ::-1]

    @cached_property
    def casorati_operator(self) -> np.ndarray:
        a = self.shape_operator
        return np.einsum("...ab,...bc->...ac", a, a)

    @cached_property
    def mean_curvature_scalar(self) -> np.ndarray:
        return np.einsum("...aa->...", self.shape_operator) / self.m

    @cached_property
    def xi_operator(self) -> np.ndarray:
        """m A_H - A^2 for a codimension-one immersion, in the tangent frame."""
        a = self.shape_operator
        return self.m * self.mean_curvature_scalar[..., None, None] * a - self.casorati_operator

    @cached_property
    def ricci_operator_frame(self) -> np.ndarray:
        e = self.frames
        e_inv = np.linalg.inv(e)
        return np.einsum("...ai,...ij,...jb->...ab", e_inv, self.ricci_operator, e)

    # -- point extraction ---------------------------------------------------------

    def form_at(self, idx):
        """FormCoefficients at a grid multi-index, in adapted frames.

        Codimension-one immersions use the normal-first adapted frame; flat
        targets in map mode use the standard ambient basis.
        """
        from .invariants import FormCoefficients, Signature

        idx = tuple(idx)
        if np.linalg.cond(self.g[idx]) > CONDITION_LIMIT:
            raise SingularChartError("metric degenerate at the requested point")
        sframe = self.sff_frame[idx]  # (m, m, D)
        signs = self.form.embed_signs
        n = self.form.dim
        if self.codimension == 1 and self.form.curvature >= 0:
            nu = self.unit_normal[idx]
            tangents = np.einsum("ia,iA->aA", self.frames[idx], self.dphi[idx])
            frame_vectors = np.concatenate([nu[None, :], tangents], axis=0)
            h = np.einsum("abA,A,cA->cab", sframe, signs, frame_vectors)
            codomain = Signature(n, 0)
        elif self.form.curvature == 0.0:
            h = signs[:, None, None] * np.moveaxis(sframe, -1, 0)
            codomain = Signature(n, self.form.index)
        else:
            raise UnsupportedModeError("adapted frames need codimension one or a flat target")
        p = int(np.sum(self.frame_signs[idx] < 0))
        return FormCoefficients(Signature(self.m, p), codomain, h)

    def point(self, idx) -> "PointGeometry":
        idx = tuple(idx)
        hyper = self.codimension == 1 and self.form.curvature >= 0
        return PointGeometry(
            index=idx,
            g=self.g[idx],
            g_inv=self.g_inv[idx],
            christoffel=self.gamma[idx],
            ricci_operator=self.ricci_operator_frame[idx],
            mean_curvature_vector=self.mean_curvature[idx],
            shape_operator=self.shape_operator[idx] if hyper else None,
            principal_curvatures=self.principal_curvatures[idx] if hyper else None,
            casorati=self.casorati_operator[idx] if hyper else None,
            xi=self.xi_operator[idx] if hyper else None,
            form=self.form_at(idx),
        )


@dataclass(frozen=True)
class PointGeometry:
    """Per-point geometric data; operator matrices refer to the orthonormal frame."""

    index: tuple
    g: np.ndarray
    g_inv: np.ndarray
    christoffel: np.ndarray
    ricci_operator: np.ndarray
    mean_curvature_vector: np.ndarray
    shape_operator: np.ndarray
    principal_curvatures: np.ndarray
    casorati: np.ndarray
    xi: np.ndarray
    form: object


def _pseudo_frame(g: np.ndarray) -> np.ndarray:
    """Pivoted signature-aware frame for one symmetric matrix: E^T g E = diag(+-1),
    negative directions first.  Deterministic largest-pivot order."""
    m = g.shape[0]
    basis = np.eye(m)
    vectors = []
    signs = []
    remaining = list(range(m))
    work = basis.copy()
    for _ in range(m):
        norms = [abs(work[i] @ g @ work[i]) for i in remaining]
        pick = remaining[int(np.argmax(norms))]
        v = work[pick]
        nrm = v @ g @ v
        if abs(nrm) < 1e-14:
            raise SingularChartError("degenerate metric in frame construction")
        v = v / np.sqrt(abs(nrm))
        sign = 1.0 if nrm > 0 else -1.0
        vectors.append(v)
        signs.append(sign)
        remaining.remove(pick)
        for i in remaining:
            work[i] = work[i] - sign * (work[i] @ g @ v) * v
    order = np.argsort(signs, kind="stable")  # -1 entries first
    e = np.stack([vectors[i] for i in order], axis=1)
    return e
