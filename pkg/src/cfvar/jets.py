"""Higher covariant derivatives of charted maps and their variational residuals.

The third covariant derivative is assembled recursively from samples of the
second, each stage applying the pullback connection along coordinate
directions and subtracting Christoffel corrections; this keeps every stage at
the accuracy of the underlying stencil.  Sums over pseudo-orthonormal frames
are evaluated as coordinate contractions with the inverse metric; the frame
route is kept alongside as an independent assembly for cross-checks.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .charts import ChartedMap, GridGeometry, UnsupportedModeError


@dataclass(frozen=True)
class JetField:
    """Covariant derivative of order k of the differential: k+1 domain slots, one ambient slot."""

    order: int
    values: np.ndarray
    stages: int  # stencil applications consumed; sets the open-axis margin


class JetBundle:
    """Jet fields and residual machinery over one chart geometry."""

    def __init__(self, geometry: GridGeometry):
        self.geom = geometry
        self.m = geometry.m
        self.curvature = geometry.form.curvature

    @cached_property
    def jet1(self) -> JetField:
        return JetField(1, self.geom.sff, 2)

    @cached_property
    def jet2(self) -> JetField:
        g = self.geom
        s = g.sff
        ds = np.stack([g.covariant_ambient_deriv(s, i) for i in range(self.m)], axis=-4)
        corr1 = np.einsum("...lij,...lkA->...ijkA", g.gamma, s)
        corr2 = np.einsum("...lik,...jlA->...ijkA", g.gamma, s)
        return JetField(2, ds - corr1 - corr2, 3)

    @cached_property
    def jet3(self) -> JetField:
        g = self.geom
        t = self.jet2.values
        dt = np.stack([g.covariant_ambient_deriv(t, i) for i in range(self.m)], axis=-5)
        corr1 = np.einsum("...mij,...mklA->...ijklA", g.gamma, t)
        corr2 = np.einsum("...mik,...jmlA->...ijklA", g.gamma, t)
        corr3 = np.einsum("...mil,...jkmA->...ijklA", g.gamma, t)
        return JetField(3, dt - corr1 - corr2 - corr3, 4)

    @cached_property
    def curvature_term(self) -> np.ndarray:
        """nu[i,j,k,l] = R^N(jet1(X_k, X_l), dphi(X_i)) dphi(X_j) for the space form."""
        g = self.geom
        shape = g.chart.shape + (self.m,) * 4 + (g.form.embed_dim,)
        if self.curvature == 0.0:
            return np.zeros(shape)
        s = g.sff
        signs = g.form.embed_signs
        sdot = np.einsum("...klA,A,...jA->...klj", s, signs, g.dphi)
        nu = np.einsum("...ij,...klA->...ijklA", g.ip, s) - np.einsum(
            "...klj,...iA->...ijklA", sdot, g.dphi
        )
        return self.curvature * nu

    @cached_property
    def _full_tensor(self) -> np.ndarray:
        return self.jet3.values + self.curvature_term

    @cached_property
    def residuals(self) -> "ResidualField":
        g = self.geom
        b = self._full_tensor
        w1 = np.einsum("...ik,...jl,...ijklA->...A", g.g_inv, g.g_inv, b)
        w2 = np.einsum("...ij,...kl,...ijklA->...A", g.g_inv, g.g_inv, b)
        return ResidualField(geometry=g, grad_form=w1, grad_trace=w2)


def jets(chart: ChartedMap, order: int = 4) -> JetBundle:
    geom = chart.geometry(order)
    if not hasattr(geom, "_jet_bundle"):
        geom._jet_bundle = JetBundle(geom)
    return geom._jet_bundle


def covariant_jets(chart: ChartedMap, order: int = 4):
    """Jet fields of orders 1, 2, 3 on the chart grid."""
    b = jets(chart, order)
    return b.jet1, b.jet2, b.jet3


@dataclass
class ResidualField:
    """First-variation gradients of the degree-two energies, per grid point.

    grad_form drives the squared-norm energy of the full form; grad_trace the
    squared-norm energy of its trace (twice the bienergy).  The determinant
    combination is assembled from the two slices, never recomputed.
    """

    geometry: GridGeometry
    grad_form: np.ndarray
    grad_trace: np.ndarray

    @property
    def chern_federer(self) -> np.ndarray:
        return self.grad_trace - self.grad_form

    @property
    def willmore_chen(self) -> np.ndarray:
        return self.geometry.m * self.grad_form - self.grad_trace

    def combo(self, alpha: float, beta: float) -> np.ndarray:
        if alpha == 0.0 and beta == 0.0:
            raise ValueError("alpha and beta must not both vanish")
        return alpha * self.grad_form + beta * self.grad_trace

    @property
    def interior(self) -> np.ndarray:
        return self.geometry.interior_mask(4)

    def _masked(self, values: np.ndarray) -> np.ndarray:
        return values[self.interior]

    def max_norm(self, values: np.ndarray) -> float:
        return float(np.linalg.norm(self._masked(values), axis=-1).max())

    def l2_norm(self, values: np.ndarray) -> float:
        pts = self._masked(values)
        return float(np.sqrt((pts**2).sum(axis=-1).mean()))

    def summary(self) -> dict:
        named = {
            "grad_form": self.grad_form,
            "grad_trace": self.grad_trace,
            "chern_federer": self.chern_federer,
            "willmore_chen": self.willmore_chen,
        }
        return {
            key: {"max": self.max_norm(v), "l2": self.l2_norm(v)} for key, v in named.items()
        }

    def normal_tangent_split(self, values: np.ndarray):
        """Split ambient vectors into parts along/normal to the immersed tangent space."""
        g = self.geometry
        signs = g.form.embed_signs
        coef = np.einsum("...A,A,...iA->...i", values, signs, g.dphi)
        comps = np.einsum("...ij,...j->...i", g.g_inv, coef)
        tangent = np.einsum("...i,...iA->...A", comps, g.dphi)
        return tangent, values - tangent

    def to_csv(self, path, which=("grad_form", "grad_trace", "chern_federer")):
        g = self.geometry
        fields = {
            "grad_form": self.grad_form,
            "grad_trace": self.grad_trace,
            "chern_federer": self.chern_federer,
            "willmore_chen": self.willmore_chen,
        }
        coords = g.grid.reshape(-1, g.m)
        mask = self.interior.reshape(-1)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            header = ["point"] + [f"u{i + 1}" for i in range(g.m)]
            for name in which:
                d = fields[name].shape[-1]
                header += [f"{name}_{a + 1}" for a in range(d)] + [f"{name}_norm"]
            writer.writerow(header)
            flat = {name: fields[name].reshape(-1, fields[name].shape[-1]) for name in which}
            for p in range(coords.shape[0]):
                if not mask[p]:
                    continue
                row = [p] + [f"{x:.17g}" for x in coords[p]]
                for name in which:
                    vec = flat[name][p]
                    row += [f"{x:.17g}" for x in vec] + [f"{np.linalg.norm(vec):.17g}"]
                writer.writerow(row)


def residual_field(chart: ChartedMap, order: int = 4) -> ResidualField:
    return jets(chart, order).residuals


def gradient_combo(chart: ChartedMap, alpha: float, beta: float, order: int = 4) -> np.ndarray:
    return residual_field(chart, order).combo(alpha, beta)


@dataclass(frozen=True)
class SecondOrderResidual:
    """Second-order form of the determinant-pattern residual for immersions
    into a space form: tangent part -dphi(tr nabla Q), normal part
    2 c m (m-1) H - tr h(Q(.), .)."""

    tangent: np.ndarray
    normal: np.ndarray
    interior: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.tangent + self.normal

    def max_norms(self):
        t = np.linalg.norm(self.tangent[self.interior], axis=-1).max()
        n = np.linalg.norm(self.normal[self.interior], axis=-1).max()
        return float(t), float(n)


def second_order_chern_federer(chart: ChartedMap, order: int = 4) -> SecondOrderResidual:
    g = chart.geometry(order)
    if g.explicit_metric:
        raise UnsupportedModeError("second-order residual requires an isometric immersion")
    m = g.m
    c = g.form.curvature
    q = g.ricci_operator  # [..., i, j] mixed
    dq = np.stack([g.deriv(q, a) for a in range(m)], axis=-3)  # [..., a, i, j]
    cov_q = (
        dq
        + np.einsum("...ias,...sj->...aij", g.gamma, q)
        - np.einsum("...saj,...is->...aij", g.gamma, q)
    )
    trvec = np.einsum("...aj,...aij->...i", g.g_inv, cov_q)
    tangent = -np.einsum("...i,...iA->...A", trvec, g.dphi)
    normal = 2.0 * c * m * (m - 1) * g.mean_curvature - np.einsum(
        "...ij,...ki,...kjA->...A", g.g_inv, q, g.sff
    )
    return SecondOrderResidual(tangent, normal, g.interior_mask(4))


def oracle_equivalence(chart: ChartedMap, order: int = 4) -> dict:
    """Compare the fourth-order determinant residual with the second-order form."""
    res = residual_field(chart, order)
    alt = second_order_chern_federer(chart, order)
    mask = res.interior
    lhs = res.chern_federer[mask]
    rhs = alt.total[mask]
    scale = max(np.linalg.norm(lhs, axis=-1).max(), np.linalg.norm(rhs, axis=-1).max(), 1.0)
    dev = np.linalg.norm(lhs - rhs, axis=-1).max()
    return {
        "max_deviation": float(dev),
        "scale": float(scale),
        "relative_deviation": float(dev / scale),
    }


def rough_laplacian_check(chart: ChartedMap, order: int = 4) -> dict:
    """Both sides of the rough-Laplacian identity for the tension field,
    discretized independently."""
    g = chart.geometry(order)
    b = jets(chart, order)
    m = g.m
    tau = g.tension
    dtau = np.stack([g.covariant_ambient_deriv(tau, i) for i in range(m)], axis=-2)
    dd = np.stack([g.covariant_ambient_deriv(dtau, i) for i in range(m)], axis=-3)
    hess = dd - np.einsum("...kij,...kA->...ijA", g.gamma, dtau)
    lhs = np.einsum("...ij,...ijA->...A", g.g_inv, hess)
    rhs = np.einsum("...ij,...kl,...ijklA->...A", g.g_inv, g.g_inv, b.jet3.values)
    mask = g.interior_mask(4)
    dev = np.linalg.norm((lhs - rhs)[mask], axis=-1).max()
    scale = max(float(np.linalg.norm(lhs[mask], axis=-1).max()), 1.0)
    return {"max_deviation": float(dev), "scale": scale, "relative_deviation": float(dev / scale)}


def commutation_checks(chart: ChartedMap, order: int = 4) -> dict:
    """Two-sided evaluation of the slot-commutation identities of the second
    and third covariant derivatives on all coordinate combinations."""
    g = chart.geometry(order)
    b = jets(chart, order)
    c = g.form.curvature
    s = g.sff
    dphi = g.dphi
    signs = g.form.embed_signs
    ip = g.ip
    sdot = np.einsum("...klA,A,...jA->...klj", s, signs, dphi)

    t2 = b.jet2.values
    lhs2 = t2 - np.swapaxes(t2, -4, -3)
    rn = c * (
        np.einsum("...jk,...iA->...ijkA", ip, dphi) - np.einsum("...ik,...jA->...ijkA", ip, dphi)
    ) if c != 0.0 else 0.0
    rm = np.einsum("...ijkl,...lA->...ijkA", g.riemann, dphi)
    rhs2 = rn - rm
    mask = g.interior_mask(4)
    dev2 = np.linalg.norm((lhs2 - rhs2)[mask], axis=-1).max()

    t3 = b.jet3.values
    lhs3 = t3 - np.swapaxes(t3, -4, -3)  # swap slots 2 and 3
    if c != 0.0:
        term1 = c * (
            np.einsum("...kl,...ijA->...ijklA", ip, s)
            - np.einsum("...ijl,...kA->...ijklA", sdot, dphi)
        )
        term2 = c * (
            np.einsum("...ikl,...jA->...ijklA", sdot, dphi)
            - np.einsum("...jl,...ikA->...ijklA", ip, s)
        )
        term3 = c * (
            np.einsum("...ilk,...jA->...ijklA", sdot, dphi)
            - np.einsum("...ilj,...kA->...ijklA", sdot, dphi)
        )
        rhs3 = term1 + term2 + term3
    else:
        rhs3 = np.zeros_like(t3)
    rhs3 = rhs3 - np.einsum("...jkln,...inA->...ijklA", g.riemann, s)
    rhs3 = rhs3 - np.einsum("...ijkln,...nA->...ijklA", g.covariant_riemann, dphi)
    dev3 = np.linalg.norm((lhs3 - rhs3)[mask], axis=-1).max()
    return {"second_order_max": float(dev2), "third_order_max": float(dev3)}


def contraction_residual_check(chart: ChartedMap, order: int = 4) -> dict:
    """Frame-based assembly of the paired contractions of the order-three data,
    compared with the coordinate-route residuals, plus the sign flip of the
    determinant pattern under the slot permutation exchanging slots 1 and 4."""
    g = chart.geometry(order)
    b = jets(chart, order)
    full = b._full_tensor
    e = g.frames
    eps = g.frame_signs
    framed = np.einsum("...ia,...jb,...kc,...ld,...ijklA->...abcdA", e, e, e, e, full)
    w = np.einsum("...a,...b->...ab", eps, eps)
    v1 = np.einsum("...ab,...ababA->...A", w, framed)
    v2 = np.einsum("...ab,...aabbA->...A", w, framed)
    res = b.residuals
    mask = g.interior_mask(4)
    dev1 = np.linalg.norm((v1 - res.grad_form)[mask], axis=-1).max()
    dev2 = np.linalg.norm((v2 - res.grad_trace)[mask], axis=-1).max()
    det = v2 - v1
    # slot permutation (1 4): framed tensor axes are (..., 1, 2, 3, 4, A)
    permuted = np.swapaxes(framed, -5, -2)
    p1 = np.einsum("...ab,...ababA->...A", w, permuted)
    p2 = np.einsum("...ab,...aabbA->...A", w, permuted)
    flip_dev = np.linalg.norm(((p2 - p1) + det)[mask], axis=-1).max()
    scale = max(float(np.linalg.norm(det[mask], axis=-1).max()), 1.0)
    return {
        "cross_assembly_max": float(dev1),
        "pair_assembly_max": float(dev2),
        "determinant_field_max": float(np.linalg.norm(det[mask], axis=-1).max()),
        "slot14_antisymmetry_defect": float(flip_dev),
        "scale": scale,
    }


def observed_order(coarse_err: float, fine_err: float, ratio: float = 2.0) -> float:
    if fine_err == 0.0:
        return np.inf
    return float(np.log(coarse_err / fine_err) / np.log(ratio))
