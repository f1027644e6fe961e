"""Pointwise algebra of second fundamental forms on pseudo-Euclidean spaces.

A form is the coefficient array h[alpha][i][j] of a symmetric bilinear map
between model spaces with signatures (m, p) and (n, q).  This module evaluates
the degree-two invariant polynomials, the pseudo-orthogonal group action, the
quadratic four-tensor with its contraction patterns, and the reduced slot
permutations that pin down the determinant pattern by its sign behaviour.

Reductions use numpy's row-major pairwise summation, so every value is
bit-reproducible for a given input array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ORTHOGONALITY_TOL = 1e-10
#: Reduced slot permutations: images of slots (1,2,3,4), 1-based.
SLOT_PERMUTATIONS = {
    "s1": (2, 1, 3, 4),
    "s2": (3, 2, 1, 4),
    "s3": (4, 2, 3, 1),
    "s4": (3, 4, 1, 2),
    "s5": (1, 4, 3, 2),
    "s6": (1, 3, 2, 4),
}
#: Permutations under which the determinant pattern flips sign.
ANTISYMMETRIC_SLOTS = ("s3", "s6")


@dataclass(frozen=True)
class Signature:
    """Dimension and index of a pseudo-Euclidean model space.

    The first `index` basis directions carry sign -1, the rest +1.
    """

    dim: int
    index: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")
        if not 0 <= self.index <= self.dim:
            raise ValueError("index must lie in [0, dim]")

    @property
    def signs(self) -> np.ndarray:
        s = np.ones(self.dim)
        s[: self.index] = -1.0
        return s

    @property
    def metric(self) -> np.ndarray:
        return np.diag(self.signs)

    def epsilon(self, i: int) -> float:
        """Sign of the i-th basis direction, 1-based."""
        return -1.0 if i <= self.index else 1.0


@dataclass(frozen=True)
class FormCoefficients:
    """Coefficients h[alpha, i, j] of a symmetric bilinear map in pseudo-orthonormal frames."""

    domain: Signature
    codomain: Signature
    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.shape != (self.codomain.dim, self.domain.dim, self.domain.dim):
            raise ValueError(f"coefficient array must have shape (n, m, m), got {h.shape}")
        if not np.allclose(h, np.swapaxes(h, 1, 2), atol=1e-12 * (1.0 + np.abs(h).max())):
            raise ValueError("coefficients must be symmetric in the two domain slots")
        sym = 0.5 * (h + np.swapaxes(h, 1, 2))
        object.__setattr__(self, "h", sym)

    def scaled(self, t: float) -> "FormCoefficients":
        return FormCoefficients(self.domain, self.codomain, t * self.h)


@dataclass(frozen=True)
class FourTensor:
    """Dense (0,4) tensor on the domain model space."""

    domain: Signature
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        m = self.domain.dim
        if v.shape != (m, m, m, m):
            raise ValueError("four-tensor must have shape (m, m, m, m)")
        object.__setattr__(self, "values", v)


def norm_sq(form: FormCoefficients) -> float:
    """Signed squared norm of the full form: sum e'_a e_i e_j h[a,i,j]^2."""
    ei = form.domain.signs
    ea = form.codomain.signs
    w = ea[:, None, None] * ei[None, :, None] * ei[None, None, :]
    return float((w * form.h**2).sum())


def trace_sq(form: FormCoefficients) -> float:
    """Signed squared norm of the trace: sum e'_a (sum e_i h[a,i,i])^2."""
    ei = form.domain.signs
    ea = form.codomain.signs
    tr = (ei[None, :] * np.diagonal(form.h, axis1=1, axis2=2)).sum(axis=1)
    return float((ea * tr**2).sum())


def chern_federer(form: FormCoefficients) -> float:
    """Determinant-pattern invariant: trace_sq - norm_sq."""
    return trace_sq(form) - norm_sq(form)


def willmore_chen(form: FormCoefficients) -> float:
    """m * norm_sq - trace_sq."""
    return form.domain.dim * norm_sq(form) - trace_sq(form)


def orthogonality_defect(a: np.ndarray, sig: Signature) -> float:
    eta = sig.metric
    return float(np.abs(a.T @ eta @ a - eta).max())


def transform(form: FormCoefficients, a: np.ndarray, b: np.ndarray) -> FormCoefficients:
    """Group action: move the form by domain matrix a and codomain matrix b.

    The new coefficients represent (u, v) -> b(H(a^-1 u, a^-1 v)).  Both
    matrices must preserve their signature metrics to ORTHOGONALITY_TOL.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if orthogonality_defect(a, form.domain) > ORTHOGONALITY_TOL:
        raise ValueError("domain matrix is not pseudo-orthogonal")
    if orthogonality_defect(b, form.codomain) > ORTHOGONALITY_TOL:
        raise ValueError("codomain matrix is not pseudo-orthogonal")
    ea = form.codomain.signs
    # h[a,i,j] = <H(e_i,e_j), xi_a>, so components of H are e'_a h[a,i,j].
    comps = ea[:, None, None] * form.h
    ainv = np.linalg.inv(a)
    new_comps = np.einsum("ba,aij,ik,jl->bkl", b, comps, ainv, ainv)
    return FormCoefficients(form.domain, form.codomain, ea[:, None, None] * new_comps)


def random_pseudo_orthogonal(sig: Signature, rng) -> np.ndarray:
    """Random element of O(p, dim-p); rotations only when p = 0, otherwise a
    product of block rotations and hyperbolic boosts with rapidity <= 1."""
    rng = np.random.default_rng(rng)
    m, p = sig.dim, sig.index
    if m == 1:
        return np.array([[rng.choice([-1.0, 1.0])]])
    if p == 0:
        q, r = np.linalg.qr(rng.standard_normal((m, m)))
        return q * np.sign(np.diag(r))

    def block_rotation(lo, hi):
        k = hi - lo
        if k < 2:
            return np.eye(m)
        q, r = np.linalg.qr(rng.standard_normal((k, k)))
        out = np.eye(m)
        out[lo:hi, lo:hi] = q * np.sign(np.diag(r))
        return out

    a = block_rotation(0, p) @ block_rotation(p, m)
    for _ in range(2):
        i = int(rng.integers(0, p))
        j = int(rng.integers(p, m))
        chi = float(rng.uniform(-1.0, 1.0))
        boost = np.eye(m)
        boost[i, i] = boost[j, j] = np.cosh(chi)
        boost[i, j] = boost[j, i] = np.sinh(chi)
        a = a @ boost @ block_rotation(0, p) @ block_rotation(p, m)
    return a


def product_tensor(form: FormCoefficients) -> FourTensor:
    """Quadratic four-tensor rho[i,j,k,l] = sum_a e'_a h[a,i,j] h[a,k,l]."""
    ea = form.codomain.signs
    rho = np.einsum("a,aij,akl->ijkl", ea, form.h, form.h)
    return FourTensor(form.domain, rho)


def contract_patterns(t: FourTensor) -> tuple[float, float]:
    """Signed double contractions of a four-tensor.

    Returns (pair, cross) where pair contracts slots (1,2) and (3,4) and cross
    contracts slots (1,3) and (2,4).  On the quadratic tensor of a form these
    reproduce (trace_sq, norm_sq).
    """
    e = t.domain.signs
    w = e[:, None] * e[None, :]
    pair = float((w * np.einsum("iijj->ij", t.values)).sum())
    cross = float((w * np.einsum("ijij->ij", t.values)).sum())
    return pair, cross


def det_pattern(t: FourTensor) -> float:
    """pair - cross contraction; equals chern_federer on a form's quadratic tensor."""
    pair, cross = contract_patterns(t)
    return pair - cross


def permute_slots(t: FourTensor, perm) -> FourTensor:
    """Slot shuffle (sigma T)[i1,i2,i3,i4] = T[i_sigma(1),...,i_sigma(4)]."""
    if isinstance(perm, str):
        perm = SLOT_PERMUTATIONS[perm]
    if sorted(perm) != [1, 2, 3, 4]:
        raise ValueError("permutation must be a bijection of (1,2,3,4)")
    letters = "abcd"
    src = "".join(letters[perm[s] - 1] for s in range(4))
    return FourTensor(t.domain, np.einsum(f"{src}->abcd", t.values))


@dataclass(frozen=True)
class SlotSymmetryReport:
    base_value: float
    values: dict
    max_antisymmetry_defect: float


def slot_symmetry_report(form: FormCoefficients) -> SlotSymmetryReport:
    """Determinant-pattern values on all reduced slot permutations of the
    quadratic tensor, with the sign-flip defect under s3 and s6."""
    rho = product_tensor(form)
    base = det_pattern(rho)
    values = {name: det_pattern(permute_slots(rho, name)) for name in SLOT_PERMUTATIONS}
    defect = max(abs(values[name] + base) for name in ANTISYMMETRIC_SLOTS)
    return SlotSymmetryReport(base, values, defect)
