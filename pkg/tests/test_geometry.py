import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isocomb.geometry import (
    IDENTITY_MOTION,
    RigidMotion2,
    Vec2,
    angle_between,
    apply_motion,
    apply_motion_many,
    circ_dist,
    compose,
    invert,
    norm_angle,
    rotate_about_x0,
)

angles = st.floats(min_value=-50.0, max_value=50.0, allow_nan=False)


def test_apply_motion_identity():
    assert apply_motion(IDENTITY_MOTION, (1.0, 2.0)) == Vec2(1.0, 2.0)


def test_apply_motion_quarter_turn():
    m = RigidMotion2(math.pi / 2, Vec2(0.0, 0.0))
    p = apply_motion(m, (1.0, 0.0))
    assert p.x == pytest.approx(0.0, abs=1e-15)
    assert p.y == pytest.approx(1.0, abs=1e-15)


def test_apply_motion_half_turn_with_shift():
    m = RigidMotion2(math.pi, Vec2(1.0, 1.0))
    p = apply_motion(m, (1.0, 0.0))
    assert p.x == pytest.approx(0.0, abs=1e-15)
    assert p.y == pytest.approx(1.0, abs=1e-15)


def test_compose_identity():
    m = RigidMotion2(0.7, Vec2(0.3, -0.4))
    c = compose(IDENTITY_MOTION, m)
    assert c.rotation == pytest.approx(m.rotation)
    assert c.translation == pytest.approx(m.translation)


def test_compose_inverse_pair():
    c = compose(RigidMotion2(0.9), RigidMotion2(-0.9))
    assert c.rotation == pytest.approx(0.0)
    assert c.translation == pytest.approx((0.0, 0.0))


def test_compose_rotations_add():
    c = compose(RigidMotion2(math.pi / 2), RigidMotion2(math.pi / 2))
    assert c.rotation == pytest.approx(math.pi)


@given(
    r1=angles, r2=angles,
    tx1=angles, ty1=angles, tx2=angles, ty2=angles,
    px=angles, py=angles,
)
def test_compose_matches_sequential_application(r1, r2, tx1, ty1, tx2, ty2, px, py):
    m1 = RigidMotion2(r1, Vec2(tx1, ty1))
    m2 = RigidMotion2(r2, Vec2(tx2, ty2))
    combined = apply_motion(compose(m1, m2), (px, py))
    sequential = apply_motion(m1, apply_motion(m2, (px, py)))
    assert combined.x == pytest.approx(sequential.x, abs=1e-9)
    assert combined.y == pytest.approx(sequential.y, abs=1e-9)


def test_invert_roundtrip():
    m = RigidMotion2(1.1, Vec2(2.0, -3.0))
    p = apply_motion(invert(m), apply_motion(m, (0.5, 0.25)))
    assert p.x == pytest.approx(0.5, abs=1e-14)
    assert p.y == pytest.approx(0.25, abs=1e-14)


def test_motion_preserves_distances_bulk():
    rng = np.random.default_rng(0)
    m = RigidMotion2(rng.uniform(-3, 3), Vec2(*rng.uniform(-5, 5, size=2)))
    p = rng.uniform(-10, 10, size=(10_000, 2))
    q = rng.uniform(-10, 10, size=(10_000, 2))
    before = np.linalg.norm(p - q, axis=1)
    after = np.linalg.norm(apply_motion_many(m, p) - apply_motion_many(m, q), axis=1)
    assert np.max(np.abs(after - before) / before) < 1e-12


def test_angle_between_examples():
    assert angle_between((1, 0), (1, 0)) == 0.0
    assert angle_between((1, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert angle_between((1, 0), (-1, 0)) == pytest.approx(math.pi)
    assert angle_between((1, 0, 0), (0, 0, 2)) == pytest.approx(math.pi / 2)


def test_angle_between_zero_vector_rejected():
    with pytest.raises(ValueError):
        angle_between((0.0, 0.0), (1.0, 0.0))


def test_circ_dist_examples():
    assert circ_dist(0.0, math.pi / 2) == pytest.approx(math.pi / 2)
    assert circ_dist(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)
    assert circ_dist(0.0, math.pi) == pytest.approx(math.pi)


@given(a=angles, b=angles, c=angles)
def test_circ_dist_properties(a, b, c):
    assert circ_dist(a, b) == pytest.approx(circ_dist(b, a), abs=1e-12)
    assert circ_dist(a, a) == 0.0
    assert 0.0 <= circ_dist(a, b) <= math.pi + 1e-12
    assert circ_dist(a, c) <= circ_dist(a, b) + circ_dist(b, c) + 1e-9


def test_rotate_about_x0_examples():
    assert rotate_about_x0(0.37, (1.0, 0.0, 0.0)) == pytest.approx((1.0, 0.0, 0.0))
    p = rotate_about_x0(math.pi / 2, (0.0, 1.0, 0.0))
    assert p == pytest.approx((0.0, 0.0, 1.0), abs=1e-15)
    c, s = 0.8, 0.6
    q = rotate_about_x0(math.pi, (c, s, 0.0))
    assert q == pytest.approx((c, -s, 0.0), abs=1e-15)


def test_rotate_about_x0_preserves_norm_and_height():
    rng = np.random.default_rng(1)
    for _ in range(200):
        p = rng.normal(size=3)
        psi = rng.uniform(-7, 7)
        q = np.array(rotate_about_x0(psi, p))
        assert q[0] == p[0]
        assert np.linalg.norm(q) == pytest.approx(np.linalg.norm(p), rel=1e-15)


def test_norm_angle_range():
    assert norm_angle(math.pi) == pytest.approx(math.pi)
    assert norm_angle(-math.pi) == pytest.approx(math.pi)
    assert norm_angle(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
