"""Realized modules and self-conjugated bases on the three spaces."""

import numpy as np
import pytest
from scipy.special import sph_harm_y

from invfields.bases import (
    SelfConjBasis,
    basis_rep_batch,
    basis_rep_matrix,
    conjugate_in_basis,
    eval_s2,
    eval_s3,
    left_translated_basis,
    make_module,
    random_selfconj_basis,
    realified_rep,
    realify_matrix,
    selfconj_basis_from_orthogonal,
    selfconj_defects,
    sph_harm_table,
    torus_adapted_selfconj_basis,
)
from invfields.groups import (
    RngStream,
    compose,
    haar_sample,
    inverse,
    torus_element,
)


SPACES = ["s2", "su2", "s3"]


def _random_point(module, rng):
    if module.space_tag == "S2":
        gen = rng.generator
        return (float(np.arccos(gen.uniform(-1, 1))), float(gen.uniform(0, 2 * np.pi)))
    return haar_sample(rng)


def test_make_module_labels():
    m = make_module("s2", 4)
    assert m.labels == [2, 1, 0, -1, -2]
    assert m.dim == 5
    m3 = make_module("s3", 2)
    assert m3.dim == 9
    assert sorted(m3.labels) == sorted(range(-4, 5)) or len(m3.labels) == 9
    mu = make_module("su2", 6)
    assert mu.labels == [3, 2, 1, 0, -1, -2, -3]


def test_make_module_rejects_odd_degree():
    # the column modules embed self-conjugated only in even degree; the
    # tensor module on S3 exists for every degree
    for space in ("s2", "su2"):
        with pytest.raises(ValueError, match="quaternionic"):
            make_module(space, 3)
    assert make_module("s3", 3).dim == 16
    with pytest.raises(ValueError):
        make_module("torus", 4)


@pytest.mark.parametrize("space,ell", [("s2", 4), ("su2", 4), ("s3", 2)])
def test_reference_action_consistency(space, ell):
    # f_k(r^{-1} x) = sum_j D_{jk}(r) f_j(x) pins the rep matrix to the
    # realized functions with no quadrature
    m = make_module(space, ell)
    rng = RngStream(17)
    for trial in range(5):
        r = m.haar(RngStream(18, trial))
        x = _random_point(m, RngStream(19, trial))
        d = m.ref_rep(r)
        f_x = m.eval_ref_vector(x)
        moved = m.rotate_point(m.inverse(r), x)
        f_moved = m.eval_ref_vector(moved)
        assert np.abs(f_moved - d.T @ f_x).max() < 1e-12


@pytest.mark.parametrize("space,ell", [("s2", 4), ("su2", 4), ("s3", 2)])
def test_reference_conjugation_signs(space, ell):
    m = make_module(space, ell)
    x = _random_point(m, RngStream(23))
    f = m.eval_ref_vector(x)
    # pointwise: conj(f_k) = sigma_k f_{-k}
    assert np.abs(np.conj(f) - m.conj_signs * f[m.neg_index]).max() < 1e-12


@pytest.mark.parametrize("space,ell", [("s2", 4), ("su2", 4), ("s3", 2)])
def test_reference_rep_is_unitary_homomorphism(space, ell):
    m = make_module(space, ell)
    r = m.haar(RngStream(29))
    s = m.haar(RngStream(30))
    dr, ds = m.ref_rep(r), m.ref_rep(s)
    assert np.abs(dr.conj().T @ dr - np.eye(m.dim)).max() < 1e-12
    if space == "s3":
        from invfields.groups import so4_compose as comp
    else:
        comp = compose
    assert np.abs(m.ref_rep(comp(r, s)) - dr @ ds).max() < 1e-12


def test_torus_adapted_basis_diagonalizes_torus():
    basis = torus_adapted_selfconj_basis(make_module("s2", 4))
    theta = 0.31
    d = basis_rep_matrix(basis, torus_element(theta))
    assert np.abs(d - np.diag(np.diag(d))).max() < 1e-13
    for i, k in enumerate(basis.labels):
        assert d[i, i] == pytest.approx(np.exp(2j * k * theta), abs=1e-13)


@pytest.mark.parametrize("space,ell", [("s2", 4), ("su2", 6), ("s3", 2)])
def test_selfconj_defects_torus_and_random(space, ell):
    ref = torus_adapted_selfconj_basis(make_module(space, ell))
    for basis in (ref, random_selfconj_basis(ref, RngStream(37))):
        defects = selfconj_defects(basis)
        assert defects["unitarity"] < 1e-13
        assert defects["pairing"] < 1e-13


def test_random_basis_is_deterministic():
    ref = torus_adapted_selfconj_basis(make_module("s2", 6))
    b1 = random_selfconj_basis(ref, RngStream(5))
    b2 = random_selfconj_basis(ref, RngStream(5))
    b3 = random_selfconj_basis(ref, RngStream(6))
    assert np.array_equal(b1.change, b2.change)
    assert not np.array_equal(b1.change, b3.change)


def test_translated_basis_conjugates_the_rep():
    ref = torus_adapted_selfconj_basis(make_module("s2", 4))
    g0 = haar_sample(RngStream(41))
    g = haar_sample(RngStream(42))
    tr = left_translated_basis(ref, g0)
    lhs = basis_rep_matrix(tr, g)
    rhs = basis_rep_matrix(ref, compose(compose(inverse(g0), g), g0))
    assert np.abs(lhs - rhs).max() < 1e-12
    assert selfconj_defects(tr)["pairing"] < 1e-13


def test_basis_rep_batch_matches_scalar():
    basis = random_selfconj_basis(
        torus_adapted_selfconj_basis(make_module("s2", 4)), RngStream(43)
    )
    gs = basis.module.haar_list(RngStream(44), 3)
    batch = basis_rep_batch(basis, gs)
    for i, g in enumerate(gs):
        assert np.abs(batch[i] - basis_rep_matrix(basis, g)).max() < 1e-13


def test_realify_matrix_is_unitary():
    for dim in (2, 3, 5, 8):
        a = realify_matrix(dim)
        assert np.abs(a.conj().T @ a - np.eye(dim)).max() < 1e-14


def test_realified_rep_is_special_orthogonal():
    basis = torus_adapted_selfconj_basis(make_module("s2", 4))
    g = haar_sample(RngStream(47))
    r = realified_rep(basis, g)
    a = realify_matrix(5)
    # conjugating by the realifier must produce an exactly real matrix
    complex_form = a @ basis_rep_matrix(basis, g) @ a.conj().T
    assert np.abs(complex_form.imag).max() < 1e-13
    assert np.abs(r @ r.T - np.eye(5)).max() < 1e-13
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-11)


def test_selfconj_basis_from_orthogonal_preserves_pairing():
    ref = torus_adapted_selfconj_basis(make_module("s2", 6))
    gen = np.random.default_rng(3)
    q, _ = np.linalg.qr(gen.normal(size=(7, 7)))
    basis = selfconj_basis_from_orthogonal(ref, q)
    defects = selfconj_defects(basis)
    assert defects["unitarity"] < 1e-13
    assert defects["pairing"] < 1e-13


def test_conjugate_in_basis_matches_pointwise_conjugation():
    basis = random_selfconj_basis(
        torus_adapted_selfconj_basis(make_module("s2", 4)), RngStream(53)
    )
    gen = np.random.default_rng(8)
    v = gen.normal(size=5) + 1j * gen.normal(size=5)
    x = _random_point(basis.module, RngStream(54))
    f = basis.module.eval_ref_vector(x) @ basis.change
    value = f @ v
    conj_value = f @ conjugate_in_basis(basis, v)
    assert conj_value == pytest.approx(np.conj(value), abs=1e-12)


def test_eval_s2_matches_scipy_harmonics():
    gen = np.random.default_rng(11)
    theta = gen.uniform(0.05, np.pi - 0.05, 6)
    phi = gen.uniform(0, 2 * np.pi, 6)
    for degree in (0, 1, 2, 5):
        for m in range(-degree, degree + 1):
            mine = eval_s2(degree, m, theta, phi)
            ref = sph_harm_y(degree, m, theta, phi)
            assert np.abs(mine - ref).max() < 1e-12


def test_sph_harm_table_consistency():
    gen = np.random.default_rng(12)
    theta = gen.uniform(0.05, np.pi - 0.05, 4)
    phi = gen.uniform(0, 2 * np.pi, 4)
    table = sph_harm_table(3, theta, phi)
    assert sorted(table) == [0, 1, 2, 3]
    for l, block in table.items():
        assert block.shape == (2 * l + 1, 4)
        for row, m in enumerate(range(l, -l - 1, -1)):
            assert np.abs(block[row] - eval_s2(l, m, theta, phi)).max() < 1e-12


def test_eval_s3_peter_weyl_normalization():
    # squared L^2 norm of sqrt(ell+1) D_{ij} over Haar measure is 1
    ell = 2
    vals = []
    for t in range(4000):
        x = haar_sample(RngStream(61, t))
        vals.append(abs(eval_s3(ell, 1, 2, x)) ** 2)
    assert np.mean(vals) == pytest.approx(1.0, abs=0.05)


def test_su2_column_module_shares_s2_rep():
    ms = make_module("su2", 4)
    m2 = make_module("s2", 4)
    g = haar_sample(RngStream(67))
    assert np.abs(ms.ref_rep(g) - m2.ref_rep(g)).max() < 1e-14
