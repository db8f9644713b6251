"""Group layer: SU(2) pairs, SO(4) double cover, seeded streams."""

import numpy as np
import pytest

from invfields.groups import (
    RngStream,
    SU2Element,
    compose,
    haar_sample,
    haar_sample_batch,
    haar_sample_so4,
    identity,
    inverse,
    rotation_matrix,
    so4_apply,
    so4_compose,
    so4_identity,
    so4_inverse,
    so4_new,
    su2_from_euler,
    su2_new,
    torus_element,
)


def test_su2_new_renormalizes():
    g = su2_new(3.0, 4.0j)
    assert g.a == pytest.approx(0.6)
    assert g.b == pytest.approx(0.8j)
    assert abs(g.a) ** 2 + abs(g.b) ** 2 == pytest.approx(1.0, abs=1e-15)


def test_su2_new_rejects_zero():
    with pytest.raises(ValueError):
        su2_new(0.0, 0.0)


def test_identity_and_inverse():
    g = su2_new(0.3 + 0.2j, -0.5 + 1.0j)
    e = identity()
    gi = compose(g, inverse(g))
    assert abs(gi.a - 1.0) < 1e-15 and abs(gi.b) < 1e-15
    ge = compose(e, g)
    assert abs(ge.a - g.a) < 1e-15 and abs(ge.b - g.b) < 1e-15


def test_compose_matches_matrix_product():
    g = su2_new(0.3 + 0.2j, -0.5 + 1.0j)
    h = su2_new(-0.1 + 0.9j, 0.4 - 0.2j)
    gh = compose(g, h)
    assert np.allclose(gh.matrix(), g.matrix() @ h.matrix(), atol=1e-15)


def test_matrix_is_special_unitary():
    g = haar_sample(RngStream(5))
    m = g.matrix()
    assert np.abs(m.conj().T @ m - np.eye(2)).max() < 1e-15
    assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-15)


def test_torus_is_one_parameter_subgroup():
    t = compose(torus_element(0.3), torus_element(0.5))
    expected = torus_element(0.8)
    assert abs(t.a - expected.a) < 1e-15 and abs(t.b - expected.b) < 1e-15
    assert torus_element(0.3).b == 0.0


def test_rotation_matrix_is_so3_homomorphism():
    g = haar_sample(RngStream(8))
    h = haar_sample(RngStream(9))
    rg, rh = rotation_matrix(g), rotation_matrix(h)
    assert np.abs(rg @ rg.T - np.eye(3)).max() < 1e-14
    assert np.linalg.det(rg) == pytest.approx(1.0, abs=1e-13)
    assert np.abs(rotation_matrix(compose(g, h)) - rg @ rh).max() < 1e-13
    # the kernel of the double cover
    minus = SU2Element(-1.0 + 0.0j, 0.0j)
    assert np.abs(rotation_matrix(minus) - np.eye(3)).max() < 1e-15


def test_rotation_matrix_of_torus_fixes_z():
    r = rotation_matrix(torus_element(0.2))
    assert np.abs(r[:, 2] - np.array([0.0, 0.0, 1.0])).max() < 1e-15
    # rotation angle in the plane is twice the torus angle
    assert r[0, 0] == pytest.approx(np.cos(0.4), abs=1e-15)
    assert r[0, 1] == pytest.approx(np.sin(0.4), abs=1e-15)


def test_euler_angles_compose_torus_and_tilt():
    # with beta = 0 the element is the torus element of angle -(alpha+gamma)/2
    e = su2_from_euler(0.4, 0.0, 0.6)
    t = torus_element(-0.5)
    assert abs(e.a - t.a) < 1e-15 and abs(e.b - t.b) < 1e-15
    # generic Euler triples give unit pairs covering a nontrivial rotation
    g = su2_from_euler(0.7, 1.1, -0.3)
    assert abs(abs(g.a) ** 2 + abs(g.b) ** 2 - 1.0) < 1e-15
    assert abs(g.b) > 0.1


def test_so4_sign_canonicalization():
    g1 = haar_sample(RngStream(21))
    g2 = haar_sample(RngStream(22))
    m1 = SU2Element(-g1.a, -g1.b)
    m2 = SU2Element(-g2.a, -g2.b)
    assert so4_new(g1, g2) == so4_new(m1, m2)
    assert so4_new(g1, g2) != so4_new(m1, g2)


def test_so4_action_is_isometric_twosided_multiplication():
    r = haar_sample_so4(RngStream(31))
    x = haar_sample(RngStream(32))
    y = so4_apply(r, x)
    assert abs(abs(y.a) ** 2 + abs(y.b) ** 2 - 1.0) < 1e-14
    direct = compose(compose(r.g1, x), inverse(r.g2))
    assert abs(y.a - direct.a) < 1e-14 and abs(y.b - direct.b) < 1e-14


def test_so4_group_laws():
    r = haar_sample_so4(RngStream(33))
    s = haar_sample_so4(RngStream(34))
    x = haar_sample(RngStream(35))
    lhs = so4_apply(so4_compose(r, s), x)
    rhs = so4_apply(r, so4_apply(s, x))
    assert abs(lhs.a - rhs.a) < 1e-13 and abs(lhs.b - rhs.b) < 1e-13
    e = so4_compose(r, so4_inverse(r))
    assert e == so4_identity() or (
        abs(e.g1.a - 1.0) < 1e-14 and abs(e.g1.b) < 1e-14
        and abs(e.g2.a - 1.0) < 1e-14 and abs(e.g2.b) < 1e-14
    )


def test_haar_sample_is_deterministic_per_stream():
    assert haar_sample(RngStream(42)) == haar_sample(RngStream(42))
    assert haar_sample(RngStream(42)) != haar_sample(RngStream(43))
    assert haar_sample(RngStream(42, 1)) != haar_sample(RngStream(42, 2))


def test_haar_batch_normalized_and_uniform():
    a, b = haar_sample_batch(RngStream(7), 20000)
    norms = np.abs(a) ** 2 + np.abs(b) ** 2
    assert np.abs(norms - 1.0).max() < 1e-14
    # coordinates of a uniform point on the unit 3-sphere in C^2
    assert np.mean(np.abs(a) ** 2) == pytest.approx(0.5, abs=0.02)
    assert np.mean(a).real == pytest.approx(0.0, abs=0.02)


def test_rngstream_split_gives_distinct_children():
    base = RngStream(11)
    kids = base.split(4)
    draws = {k.generator.random() for k in kids}
    assert len(draws) == 4
    # splitting is reproducible
    again = RngStream(11).split(4)
    assert [k.generator.random() for k in RngStream(11).split(4)] == [
        k.generator.random() for k in again
    ]


def test_rngstream_is_frozen_and_hashable():
    s = RngStream(1, 2)
    with pytest.raises(AttributeError):
        s.seed = 9
    assert hash(RngStream(1, 2)) == hash(RngStream(1, 2))
