import math

import numpy as np
import pytest

from isocomb.errors import AntipodalEdge, NotConvexSpherical, NotOnSphere
from isocomb.geometry import TAU
from isocomb.spherical import (
    build_spherical_polygon,
    centroid_direction,
    fan_area,
    geodesic_length,
    random_convex_link,
    sph_point_at,
    sph_points_at,
)


def test_octant_triangle(octant):
    assert octant.perimeter == pytest.approx(3 * math.pi / 2)
    assert np.allclose(octant.turning, math.pi / 2)
    assert octant.area == pytest.approx(math.pi / 2)
    assert octant.gauss_bonnet_residual == pytest.approx(0.0, abs=1e-12)


def test_octant_fan_area_independent(octant):
    assert fan_area(octant.vertices) == pytest.approx(math.pi / 2, abs=1e-12)


def test_small_circle_polygon_turning_vs_area():
    n, rho = 64, 0.3
    phi = np.arange(n) * (TAU / n)
    ring = np.column_stack(
        [np.full(n, math.cos(rho)), math.sin(rho) * np.cos(phi), math.sin(rho) * np.sin(phi)]
    )
    poly = build_spherical_polygon(ring)
    assert np.sum(poly.turning) == pytest.approx(TAU - poly.area, abs=1e-9)
    assert poly.perimeter == pytest.approx(TAU * math.sin(rho), rel=1e-3)
    assert poly.area == pytest.approx(TAU * (1 - math.cos(rho)), rel=5e-3)


def test_rejects_non_unit_vertices():
    with pytest.raises(NotOnSphere):
        build_spherical_polygon([(1, 0, 0), (0, 2, 0), (0, 0, 1)])


def test_rejects_antipodal_edge():
    with pytest.raises(AntipodalEdge):
        build_spherical_polygon([(1, 0, 0), (-1, 0, 0), (0, 0, 1)])


def test_rejects_nonconvex_spherical():
    # quadrilateral with one vertex pushed inside the triangle hull
    c = 1 / math.sqrt(3)
    verts = [
        (1, 0, 0),
        (0, 1, 0),
        (c, c, c),  # reflex dent
        (0, 0, 1),
    ]
    with pytest.raises(NotConvexSpherical):
        build_spherical_polygon(verts)


def test_rejects_perimeter_at_least_two_pi():
    # near-equatorial ring has perimeter close to 2*pi from below; push a
    # vertex chain around a great circle exactly: use equator points
    verts = [(0, 1, 0), (0, 0, 1), (0, -1, 0), (0, 0, -1)]
    with pytest.raises(NotConvexSpherical):
        build_spherical_polygon(verts)


def test_sph_point_at_examples(octant):
    assert sph_point_at(octant, 0.0) == pytest.approx((1, 0, 0))
    mid = sph_point_at(octant, math.pi / 4)
    assert mid == pytest.approx((math.sqrt(2) / 2, math.sqrt(2) / 2, 0.0))
    assert sph_point_at(octant, octant.perimeter) == pytest.approx((1, 0, 0), abs=1e-12)


def test_sph_points_at_unit_norm(octant):
    ss = np.linspace(0, octant.perimeter, 100)
    pts = sph_points_at(octant, ss)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_base_inside_edge(octant):
    shifted = octant.with_base(0.2)
    p = sph_point_at(shifted, 0.0)
    assert geodesic_length(p, np.array([1.0, 0, 0])) == pytest.approx(0.2, abs=1e-12)


def test_centroid_octant(octant):
    c = centroid_direction(octant)
    assert c == pytest.approx(np.full(3, 1 / math.sqrt(3)))


def test_random_convex_link_hits_target_length():
    rng = np.random.default_rng(21)
    for target in (0.8, 2.5, 4.0, 5.5):
        link = random_convex_link(rng, target)
        assert abs(link.perimeter - target) <= 1e-10
        assert link.min_turning() > 0
        assert link.gauss_bonnet_residual <= 1e-10
        assert 0.0 <= link.base_s < link.perimeter


def test_random_convex_link_rejects_bad_target():
    rng = np.random.default_rng(3)
    with pytest.raises(ValueError):
        random_convex_link(rng, TAU + 0.1)
