import numpy as np
import pytest

from cfvar.invariants import (
    ANTISYMMETRIC_SLOTS,
    SLOT_PERMUTATIONS,
    FormCoefficients,
    FourTensor,
    Signature,
    chern_federer,
    contract_patterns,
    det_pattern,
    norm_sq,
    orthogonality_defect,
    permute_slots,
    product_tensor,
    random_pseudo_orthogonal,
    slot_symmetry_report,
    trace_sq,
    transform,
    willmore_chen,
)


def make_form(m, p, n, q, h):
    return FormCoefficients(Signature(m, p), Signature(n, q), np.asarray(h, dtype=float))


def random_form(rng, m, p, n, q):
    h = rng.standard_normal((n, m, m))
    h = 0.5 * (h + np.swapaxes(h, 1, 2))
    return make_form(m, p, n, q, h)


def brute_norm_sq(form):
    # independent double-loop oracle
    total = 0.0
    m, n = form.domain.dim, form.codomain.dim
    for a in range(1, n + 1):
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                total += (
                    form.codomain.epsilon(a)
                    * form.domain.epsilon(i)
                    * form.domain.epsilon(j)
                    * form.h[a - 1, i - 1, j - 1] ** 2
                )
    return total


def brute_trace_sq(form):
    total = 0.0
    m, n = form.domain.dim, form.codomain.dim
    for a in range(1, n + 1):
        tr = sum(form.domain.epsilon(i) * form.h[a - 1, i - 1, i - 1] for i in range(1, m + 1))
        total += form.codomain.epsilon(a) * tr**2
    return total


IDENT2 = [[[1.0, 0.0], [0.0, 1.0]]]
OFFDIAG2 = [[[0.0, 1.0], [1.0, 0.0]]]


def test_invariant_values_on_small_forms():
    assert norm_sq(make_form(2, 0, 1, 0, IDENT2)) == 2.0
    assert norm_sq(make_form(2, 1, 1, 0, IDENT2)) == 2.0
    assert trace_sq(make_form(2, 0, 1, 0, IDENT2)) == 4.0
    assert trace_sq(make_form(2, 1, 1, 0, IDENT2)) == 0.0
    assert trace_sq(make_form(2, 0, 1, 0, OFFDIAG2)) == 0.0
    zero = make_form(2, 0, 1, 0, np.zeros((1, 2, 2)))
    assert chern_federer(zero) == 0.0
    assert chern_federer(make_form(2, 0, 1, 0, IDENT2)) == 2.0
    assert chern_federer(make_form(2, 0, 1, 0, OFFDIAG2)) == -2.0
    assert willmore_chen(zero) == 0.0
    assert willmore_chen(make_form(2, 0, 1, 0, IDENT2)) == 0.0
    id3 = np.eye(3)[None, :, :]
    assert willmore_chen(make_form(3, 0, 1, 0, id3)) == 0.0


def test_brute_force_oracle_agreement():
    rng = np.random.default_rng(3)
    for m, p, n, q in [(2, 0, 1, 0), (3, 1, 2, 0), (4, 2, 3, 1), (5, 0, 4, 2)]:
        form = random_form(rng, m, p, n, q)
        assert abs(norm_sq(form) - brute_norm_sq(form)) <= 1e-12 * (1 + abs(norm_sq(form)))
        assert abs(trace_sq(form) - brute_trace_sq(form)) <= 1e-12 * (1 + abs(trace_sq(form)))


def test_homogeneity_degree_two():
    rng = np.random.default_rng(11)
    form = random_form(rng, 3, 1, 2, 1)
    for t in (2.0, -3.0, 0.5):
        for func in (norm_sq, trace_sq):
            assert abs(func(form.scaled(t)) - t**2 * func(form)) <= 1e-12 * (
                1 + abs(t**2 * func(form))
            )


def test_transform_identity_and_permutation():
    rng = np.random.default_rng(5)
    form = random_form(rng, 3, 0, 2, 0)
    same = transform(form, np.eye(3), np.eye(2))
    assert np.allclose(same.h, form.h, atol=1e-14)
    # permutation of same-sign basis vectors just relabels rows/columns
    perm = np.eye(3)[[1, 0, 2]]
    moved = transform(form, perm, np.eye(2))
    # a^-1 e_1 = e_2 etc: new h[.,k,l] = h[., sigma(k), sigma(l)]
    expect = form.h[:, [1, 0, 2], :][:, :, [1, 0, 2]]
    assert np.allclose(moved.h, expect, atol=1e-12)


def test_transform_rejects_non_orthogonal():
    rng = np.random.default_rng(5)
    form = random_form(rng, 2, 0, 1, 0)
    with pytest.raises(ValueError):
        transform(form, 2.0 * np.eye(2), np.eye(1))


def test_pseudo_orthogonal_generator():
    a = random_pseudo_orthogonal(Signature(2, 0), 42)
    assert orthogonality_defect(a, Signature(2, 0)) <= 1e-12
    b = random_pseudo_orthogonal(Signature(2, 1), 42)
    assert orthogonality_defect(b, Signature(2, 1)) <= 1e-10
    again = random_pseudo_orthogonal(Signature(2, 1), 42)
    assert np.array_equal(b, again)


def test_group_invariance_sweep():
    # 200 random (form, a, b) across signatures with m, n <= 5, p, q in {0, 1}
    rng = np.random.default_rng(2024)
    for k in range(200):
        m = int(rng.integers(1, 6))
        n = int(rng.integers(1, 6))
        p = int(rng.integers(0, 2)) if m > 1 else 0
        q = int(rng.integers(0, 2)) if n > 1 else 0
        form = random_form(rng, m, p, n, q)
        a = random_pseudo_orthogonal(Signature(m, p), rng)
        b = random_pseudo_orthogonal(Signature(n, q), rng)
        moved = transform(form, a, b)
        for func in (norm_sq, trace_sq):
            v0, v1 = func(form), func(moved)
            assert abs(v1 - v0) <= 1e-8 * (1 + abs(v0)), (k, m, p, n, q)


def test_product_tensor_values_and_symmetry():
    zero = make_form(2, 0, 1, 0, np.zeros((1, 2, 2)))
    assert not product_tensor(zero).values.any()
    rho = product_tensor(make_form(2, 0, 1, 0, IDENT2)).values
    assert rho[0, 0, 1, 1] == 1.0
    assert rho[0, 1, 0, 1] == 0.0
    rng = np.random.default_rng(9)
    form = random_form(rng, 4, 1, 3, 1)
    v = product_tensor(form).values
    assert np.array_equal(v, np.transpose(v, (2, 3, 0, 1)))
    assert np.array_equal(v, np.transpose(v, (1, 0, 2, 3)))


def test_contraction_reproduces_invariants():
    rng = np.random.default_rng(13)
    for m, p, n, q in [(2, 0, 1, 0), (3, 1, 2, 1), (5, 1, 4, 0)]:
        form = random_form(rng, m, p, n, q)
        pair, cross = contract_patterns(product_tensor(form))
        assert abs(pair - trace_sq(form)) <= 1e-12 * (1 + abs(pair))
        assert abs(cross - norm_sq(form)) <= 1e-12 * (1 + abs(cross))
        assert abs(det_pattern(product_tensor(form)) - chern_federer(form)) <= 1e-12 * (
            1 + abs(chern_federer(form))
        )
    zero = FourTensor(Signature(3, 0), np.zeros((3, 3, 3, 3)))
    assert contract_patterns(zero) == (0.0, 0.0)


def test_permute_slots_basics():
    rng = np.random.default_rng(17)
    t = FourTensor(Signature(3, 0), rng.standard_normal((3, 3, 3, 3)))
    assert np.array_equal(permute_slots(t, (1, 2, 3, 4)).values, t.values)
    # s3 is an involution
    assert np.array_equal(permute_slots(permute_slots(t, "s3"), "s3").values, t.values)
    # s1 fixes a tensor symmetric in its first two slots
    form = random_form(rng, 3, 0, 2, 0)
    rho = product_tensor(form)
    assert np.array_equal(permute_slots(rho, "s1").values, rho.values)


def test_slot_symmetry_report():
    zero = make_form(2, 0, 1, 0, np.zeros((1, 2, 2)))
    rep = slot_symmetry_report(zero)
    assert all(v == 0.0 for v in rep.values.values())
    rng = np.random.default_rng(23)
    form = random_form(rng, 4, 1, 3, 0)
    rep = slot_symmetry_report(form)
    scale = 1 + abs(rep.base_value)
    for name in ANTISYMMETRIC_SLOTS:
        assert abs(rep.values[name] + rep.base_value) <= 1e-12 * scale
    assert abs(rep.values["s1"] - rep.base_value) <= 1e-12 * scale
    assert rep.max_antisymmetry_defect <= 1e-12 * scale


def test_det_pattern_is_unique_antisymmetric_combination():
    # Assemble, from random samples, the 2x2 system forcing antisymmetry of
    # x*cross + y*pair under s3 and s6; its kernel must be spanned by (-1, 1).
    rng = np.random.default_rng(31)
    rows = []
    for _ in range(8):
        form = random_form(rng, 3, 0, 2, 0)
        rho = product_tensor(form)
        for name in ANTISYMMETRIC_SLOTS:
            moved = permute_slots(rho, name)
            p0, c0 = contract_patterns(rho)
            p1, c1 = contract_patterns(moved)
            rows.append([c1 + c0, p1 + p0])
    a = np.array(rows)
    _, s, vt = np.linalg.svd(a)
    assert s[0] > 1e-6  # rank exactly 1: one nontrivial constraint ...
    assert s[1] <= 1e-10 * s[0]  # ... and a one-dimensional kernel
    kernel = vt[-1]
    kernel = kernel / np.linalg.norm(kernel)
    assert abs(abs(kernel @ [-1, 1] / np.sqrt(2)) - 1) <= 1e-10


def test_dimension_one_degeneracy():
    rng = np.random.default_rng(37)
    for q in (0, 1):
        form = random_form(rng, 1, 0, 3, q)
        assert abs(norm_sq(form) - trace_sq(form)) <= 1e-12 * (1 + abs(norm_sq(form)))
        assert abs(chern_federer(form)) <= 1e-12 * (1 + abs(norm_sq(form)))
