import math

import numpy as np
import pytest

from isocomb.errors import (
    DegenerateEdge,
    NotConvex,
    NotSimple,
    WrongOrientation,
)
from isocomb.planar import (
    build_polygon,
    convexity_certificate,
    dilate_to_perimeter,
    inscribe,
    left_semitangent,
    point_at,
    points_at,
    right_semitangent,
    turning_function,
)

TAU = 2 * math.pi


def test_build_unit_square(unit_square):
    assert unit_square.perimeter == 4.0
    assert np.allclose(unit_square.exterior_angles(), math.pi / 2)
    assert unit_square.n_vertices == 4


def test_build_rejects_clockwise():
    with pytest.raises(WrongOrientation):
        build_polygon([(0, 0), (0, 1), (1, 1), (1, 0)])


def test_build_rejects_reflex():
    with pytest.raises(NotConvex):
        build_polygon([(0, 0), (2, 0), (1, 0.4), (0, 1)])


def test_build_rejects_duplicate_vertex():
    with pytest.raises(DegenerateEdge):
        build_polygon([(0, 0), (1, 0), (1, 0), (0, 1)])


def test_build_rejects_double_winding():
    # pentagram order: locally convex but winds twice
    t = np.arange(5) * (4 * math.pi / 5)
    with pytest.raises(NotSimple):
        build_polygon(np.column_stack([np.cos(t), np.sin(t)]))


def test_build_requires_three_vertices():
    with pytest.raises(ValueError):
        build_polygon([(0, 0), (1, 0)])


def test_collinear_vertices_merged():
    poly = build_polygon([(0, 0), (0.5, 0.0), (1, 0), (1, 1), (0, 1)])
    assert poly.n_vertices == 4
    assert poly.perimeter == pytest.approx(4.0)


def test_collinear_merge_shifts_base_consistently():
    # first input vertex is collinear and merged away; the marked point at
    # arc 0.25 from it must stay at the same geometric location
    poly = build_polygon([(0.5, 0.0), (1, 0), (1, 1), (0, 1), (0, 0)], base_s=0.25)
    p = point_at(poly, 0.0)
    assert p == pytest.approx((0.75, 0.0))


def test_point_at_examples(unit_square):
    assert point_at(unit_square, 0.0) == (0.0, 0.0)
    assert point_at(unit_square, 1.5) == pytest.approx((1.0, 0.5))
    assert point_at(unit_square, 4.0) == (0.0, 0.0)
    assert point_at(unit_square, -1.0) == pytest.approx((0.0, 1.0))


def test_point_at_periodicity_exact(unit_square):
    for s in np.arange(0.0, 4.0, 1 / 64):
        assert point_at(unit_square, s) == point_at(unit_square, s + 4.0)


def test_points_at_matches_scalar(unit_square):
    ss = np.linspace(-3.0, 9.0, 57)
    bulk = points_at(unit_square, ss)
    single = np.array([point_at(unit_square, s) for s in ss])
    assert np.allclose(bulk, single, atol=1e-14)


def test_right_semitangent_examples(unit_square):
    assert right_semitangent(unit_square, 0.0) == 0.0
    assert right_semitangent(unit_square, 1.0) == pytest.approx(math.pi / 2)
    assert right_semitangent(unit_square, 0.5) == 0.0


def test_left_semitangent_examples(unit_square):
    assert left_semitangent(unit_square, 1.0) == 0.0
    assert left_semitangent(unit_square, 0.5) == 0.0
    assert left_semitangent(unit_square, 0.0) == pytest.approx(-math.pi / 2)


def test_semitangents_agree_on_edge_interiors(unit_square):
    for s in (0.25, 1.75, 2.5, 3.9):
        assert right_semitangent(unit_square, s) == left_semitangent(unit_square, s)


def test_turning_function_mid_edge_base():
    sq = build_polygon([(0, 0), (1, 0), (1, 1), (0, 1)], base_s=0.5)
    tf = turning_function(sq)
    assert np.allclose(tf.breakpoints, [0.5, 1.5, 2.5, 3.5])
    assert np.allclose(tf.jumps(), math.pi / 2)
    assert tf.total_increase() == pytest.approx(TAU, abs=1e-9)
    assert tf.evaluate(0.0) == 0.0
    assert tf.evaluate(0.5) == pytest.approx(math.pi / 2)
    assert tf.evaluate(0.49) == 0.0


def test_turning_function_vertex_base(unit_square):
    tf = turning_function(unit_square)
    # the vertex at the base contributes its jump at the period end
    assert np.allclose(tf.breakpoints, [1.0, 2.0, 3.0, 4.0])
    assert tf.total_increase() == pytest.approx(TAU, abs=1e-9)


def test_turning_function_hexagon():
    t = np.arange(6) * (TAU / 6)
    hexagon = build_polygon(np.column_stack([np.cos(t), np.sin(t)]), base_s=0.1)
    tf = turning_function(hexagon)
    assert np.allclose(tf.jumps(), math.pi / 3)


def test_certificate_square(unit_square):
    cert = convexity_certificate(unit_square.vertices, 1e-9)
    assert cert.is_convex
    assert cert.exterior_sum == pytest.approx(TAU)
    assert cert.min_exterior == pytest.approx(math.pi / 2)
    assert np.allclose(cert.interior_angles, math.pi / 2)


def test_certificate_reflex_chevron():
    cert = convexity_certificate([(0, 0), (2, 0), (1, 0.4), (0, 1)], 1e-9)
    assert not cert.is_convex
    assert cert.min_exterior < 0


def test_certificate_never_raises_on_clockwise():
    cert = convexity_certificate([(0, 0), (0, 1), (1, 1), (1, 0)], 1e-9)
    assert not cert.is_convex


def test_inscribe_square_recovers_square(unit_square):
    poly = inscribe(unit_square, 4)
    assert np.array_equal(poly.vertices, unit_square.vertices)


def test_inscribe_merges_collinear_samples(unit_square):
    poly = inscribe(unit_square, 8)
    assert poly.n_vertices == 4
    assert poly.perimeter == pytest.approx(4.0)


def test_inscribe_perimeter_monotone_on_circle():
    t = np.arange(64) * (TAU / 64)
    circle = build_polygon(np.column_stack([np.cos(t), np.sin(t)]), base_s=0.013)
    perims = [inscribe(circle, n).perimeter for n in (4, 8, 16, 32)]
    assert all(a < b for a, b in zip(perims, perims[1:]))
    assert all(p <= circle.perimeter for p in perims)


def test_inscribe_requires_three_samples(unit_square):
    with pytest.raises(ValueError):
        inscribe(unit_square, 2)


def test_dilate_square(unit_square):
    big = dilate_to_perimeter(unit_square, 8.0, (0.0, 0.0))
    assert big.perimeter == pytest.approx(8.0, rel=1e-12)
    assert big.vertices[1] == pytest.approx((2.0, 0.0))


def test_dilate_identity(unit_square):
    same = dilate_to_perimeter(unit_square, unit_square.perimeter, (0.3, 0.3))
    assert np.allclose(same.vertices, unit_square.vertices, atol=1e-15)


def test_dilate_roundtrip():
    t = np.arange(7) * (TAU / 7)
    poly = build_polygon(np.column_stack([1.3 * np.cos(t), np.sin(t) + 0.2]), base_s=0.4)
    there = dilate_to_perimeter(poly, 1.0, (0.1, -0.2))
    assert there.perimeter == pytest.approx(1.0, rel=1e-12)
    back = dilate_to_perimeter(there, poly.perimeter, (0.1, -0.2))
    assert np.allclose(back.vertices, poly.vertices, atol=1e-12)
    assert back.base_s == pytest.approx(poly.base_s, rel=1e-12)
