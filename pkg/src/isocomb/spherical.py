"""Closed convex geodesic polygons on the unit sphere.

Orientation is counterclockwise as seen from outside the sphere (interior
on the left of travel).  Convexity is certified by nonnegative geodesic
turning at every vertex together with a Gauss-Bonnet check: total turning
plus enclosed area must equal 2*pi, where the area is computed both from
the angle excess and, independently, from a signed triangle fan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import AntipodalEdge, DegenerateEdge, NotConvexSpherical, NotOnSphere
from .geometry import TAU
from .planar import SNAP_FACTOR, _reduce_mod

UNIT_NORM_TOL = 1e-9
SPH_COLLINEAR_EPS = 1e-12
GAUSS_BONNET_TOL = 1e-8


def unit_rows(v: np.ndarray) -> np.ndarray:
    """Rows divided by their norms (a norm of exactly 1.0 keeps the bits)."""
    v = np.asarray(v, dtype=float)
    n = np.sqrt(np.sum(v * v, axis=-1, keepdims=True))
    return v / n


def geodesic_length(a: np.ndarray, b: np.ndarray) -> float:
    """Great-circle distance between unit vectors, stable near 0 and pi."""
    return float(np.arctan2(np.linalg.norm(np.cross(a, b)), np.dot(a, b)))


def _edge_lengths(verts: np.ndarray) -> np.ndarray:
    nxt = np.roll(verts, -1, axis=0)
    cross = np.cross(verts, nxt)
    s = np.linalg.norm(cross, axis=1)
    c = np.sum(verts * nxt, axis=1)
    return np.arctan2(s, c)


def _tangent_toward(at: np.ndarray, toward: np.ndarray) -> np.ndarray:
    """Unit tangent at ``at`` pointing along the geodesic toward ``toward``."""
    t = toward - np.sum(toward * at, axis=-1, keepdims=True) * at
    return unit_rows(t)


def _signed_turns(verts: np.ndarray) -> np.ndarray:
    """Geodesic turning angle at each vertex, positive for left turns."""
    prv = np.roll(verts, 1, axis=0)
    nxt = np.roll(verts, -1, axis=0)
    arrive = -_tangent_toward(verts, prv)
    depart = _tangent_toward(verts, nxt)
    cross = np.cross(arrive, depart)
    return np.arctan2(np.sum(verts * cross, axis=1), np.sum(arrive * depart, axis=1))


def _interior_angles(verts: np.ndarray) -> np.ndarray:
    prv = np.roll(verts, 1, axis=0)
    nxt = np.roll(verts, -1, axis=0)
    a = _tangent_toward(verts, prv)
    b = _tangent_toward(verts, nxt)
    dots = np.clip(np.sum(a * b, axis=1), -1.0, 1.0)
    return np.arccos(dots)


def fan_area(verts: np.ndarray) -> float:
    """Signed enclosed area from a triangle fan; independent of angle sums."""
    apex = unit_rows(np.mean(verts, axis=0))
    a = verts
    b = np.roll(verts, -1, axis=0)
    triple = np.sum(apex * np.cross(a, b), axis=1)
    denom = 1.0 + a @ apex + np.sum(a * b, axis=1) + b @ apex
    return float(np.sum(2.0 * np.arctan2(triple, denom)))


@dataclass(frozen=True, eq=False)
class SphericalPolygon:
    """Validated convex geodesic polygon; the link of a convex cone."""

    vertices: np.ndarray        # (n, 3) unit rows, counterclockwise from outside
    cum_lengths: np.ndarray     # (n,) geodesic arc length at each vertex
    perimeter: float
    base_s: float
    turning: np.ndarray         # (n,) geodesic turning at each vertex
    area: float                 # angle-excess area
    gauss_bonnet_residual: float

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def vertex_positions(self) -> np.ndarray:
        pos = self.cum_lengths - self.base_s
        return np.where(pos < 0.0, pos + self.perimeter, pos)

    def with_base(self, base_s: float) -> "SphericalPolygon":
        return replace(self, base_s=_reduce_mod(base_s, self.perimeter))

    def min_turning(self) -> float:
        return float(np.min(self.turning))


def build_spherical_polygon(
    vertices, base_s: float = 0.0, *, collinear_eps: float = SPH_COLLINEAR_EPS
) -> SphericalPolygon:
    """Validate vertices and construct a :class:`SphericalPolygon`.

    Raises:
        NotOnSphere: a vertex norm is off unity by more than 1e-9.
        AntipodalEdge: consecutive vertices (nearly) antipodal.
        DegenerateEdge: consecutive vertices coincide within tolerance.
        NotConvexSpherical: negative turning, winding, Gauss-Bonnet failure,
            or perimeter not below 2*pi.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 3 or len(verts) < 3:
        raise ValueError("expected at least 3 spherical vertices of shape (n, 3)")
    if not np.all(np.isfinite(verts)):
        raise ValueError("vertices must be finite")
    norms = np.linalg.norm(verts, axis=1)
    if np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
        raise NotOnSphere(f"vertex norm off unity by {np.max(np.abs(norms - 1.0)):.3e}")
    verts = unit_rows(verts)

    while True:
        lengths = _edge_lengths(verts)
        perimeter = float(np.sum(lengths))
        dots = np.sum(verts * np.roll(verts, -1, axis=0), axis=1)
        if np.any((lengths > math.pi - 1e-9) | (dots <= -1.0 + 1e-12)):
            raise AntipodalEdge("consecutive vertices are antipodal")
        if np.any(lengths < 1e-12 * perimeter):
            raise DegenerateEdge("consecutive vertices coincide within tolerance")
        turns = _signed_turns(verts)
        if np.any(turns < -collinear_eps):
            raise NotConvexSpherical(f"negative geodesic turning {turns.min():.3e}")
        if np.any(turns >= math.pi - 1e-12):
            raise NotConvexSpherical("degenerate reversal at a vertex")
        keep = np.abs(turns) > collinear_eps
        if keep.all():
            break
        if keep.sum() < 3:
            raise NotConvexSpherical("fewer than 3 corners after collinear merge")
        first_kept = int(np.argmax(keep))
        base_s = base_s - float(np.sum(lengths[:first_kept]))
        verts = verts[keep]

    if perimeter >= TAU:
        raise NotConvexSpherical(f"link perimeter {perimeter:.12f} is not below 2*pi")
    area = float(np.sum(_interior_angles(verts))) - (len(verts) - 2) * math.pi
    residual = abs(float(np.sum(turns)) + area - TAU)
    if residual > GAUSS_BONNET_TOL:
        raise NotConvexSpherical(f"Gauss-Bonnet residual {residual:.3e}")
    if abs(fan_area(verts) - area) > GAUSS_BONNET_TOL:
        raise NotConvexSpherical("fan area disagrees with angle excess (winding?)")
    if not 0.0 < area < TAU:
        raise NotConvexSpherical(f"enclosed area {area:.12f} outside (0, 2*pi)")

    cum = np.concatenate([[0.0], np.cumsum(lengths[:-1])])
    return SphericalPolygon(
        vertices=verts,
        cum_lengths=cum,
        perimeter=perimeter,
        base_s=_reduce_mod(base_s, perimeter),
        turning=turns,
        area=area,
        gauss_bonnet_residual=residual,
    )


def sph_points_at(poly: SphericalPolygon, ss: np.ndarray) -> np.ndarray:
    """Vectorized point lookup by geodesic arc length from the base point."""
    ss = np.asarray(ss, dtype=float)
    x = np.mod(poly.base_s + ss, poly.perimeter)
    x[x >= poly.perimeter] = 0.0
    idx = np.searchsorted(poly.cum_lengths, x, side="right") - 1
    snap = SNAP_FACTOR * poly.perimeter
    nxt = np.concatenate([poly.cum_lengths[1:], [poly.perimeter]])
    bump = nxt[idx] - x <= snap
    idx[bump] = (idx[bump] + 1) % poly.n_vertices
    u = x - poly.cum_lengths[idx]
    u[bump] = 0.0
    u[u <= snap] = 0.0
    a = poly.vertices[idx]
    b = poly.vertices[(idx + 1) % poly.n_vertices]
    theta = np.concatenate([np.diff(poly.cum_lengths), [poly.perimeter - poly.cum_lengths[-1]]])[idx]
    st = np.sin(theta)
    out = (np.sin(theta - u)[:, None] * a + np.sin(u)[:, None] * b) / st[:, None]
    exact = u == 0.0
    out[exact] = a[exact]
    return out


def sph_point_at(poly: SphericalPolygon, s: float) -> np.ndarray:
    """Point at geodesic arc length ``s`` from the base point."""
    return sph_points_at(poly, np.array([float(s)]))[0]


def centroid_direction(poly: SphericalPolygon) -> np.ndarray:
    """Direction of the enclosed region's centroid (area-weighted).

    The surface integral of the position vector over the region equals half
    the boundary circulation of r x dr, which along geodesic edges is the
    edge length times the unit edge normal.
    """
    a = poly.vertices
    b = np.roll(a, -1, axis=0)
    normals = unit_rows(np.cross(a, b))
    c = 0.5 * np.sum(_edge_lengths(a)[:, None] * normals, axis=0)
    n = np.linalg.norm(c)
    if n < 1e-14:
        raise NotConvexSpherical("degenerate centroid direction")
    return c / n


def rotate_polygon(poly: SphericalPolygon, rot: np.ndarray) -> SphericalPolygon:
    """Apply a 3x3 rotation matrix; intrinsic data is revalidated."""
    return build_spherical_polygon(poly.vertices @ np.asarray(rot).T, base_s=poly.base_s)


def gnomonic(points: np.ndarray) -> np.ndarray:
    """Central projection of x0 > 0 points onto the plane x0 = 1."""
    points = np.asarray(points, dtype=float)
    return points[:, 1:] / points[:, :1]


def gnomonic_inverse(w: np.ndarray) -> np.ndarray:
    """Unit vectors over gnomonic plane coordinates."""
    w = np.asarray(w, dtype=float)
    scale = 1.0 / np.sqrt(1.0 + np.sum(w * w, axis=1))
    return np.column_stack([scale, w[:, 0] * scale, w[:, 1] * scale])


def _cap_samples(rng: np.random.Generator, n: int, cap_angle: float) -> np.ndarray:
    """Uniform-area samples in the polar cap around +x0."""
    c = rng.uniform(math.cos(cap_angle), 1.0, size=n)
    phi = rng.uniform(0.0, TAU, size=n)
    s = np.sqrt(1.0 - c * c)
    return np.column_stack([c, s * np.cos(phi), s * np.sin(phi)])


def random_convex_link(
    rng: np.random.Generator,
    target_length: float,
    n_points: int = 24,
    cap_angle: float = 1.45,
    max_attempts: int = 200,
) -> SphericalPolygon:
    """Random convex spherical polygon with a prescribed perimeter.

    Takes the geodesic convex hull (via the gnomonic plane) of random cap
    points, then contracts it toward the pole by scaling the gnomonic
    coordinates until the perimeter matches ``target_length`` to 1e-10.
    """
    from scipy.optimize import brentq
    from scipy.spatial import ConvexHull, QhullError

    if not 0.0 < target_length < TAU:
        raise ValueError("target link length must lie in (0, 2*pi)")
    for _ in range(max_attempts):
        pts = _cap_samples(rng, n_points, cap_angle)
        w = gnomonic(pts)
        try:
            hull = ConvexHull(w)
        except QhullError:
            continue
        wh = w[hull.vertices]  # counterclockwise
        if len(wh) < 3:
            continue

        def perim(lam: float) -> float:
            return float(np.sum(_edge_lengths(gnomonic_inverse(lam * wh))))

        if perim(1.0) <= target_length * 1.0000001:
            continue
        lam = brentq(lambda t: perim(t) - target_length, 1e-9, 1.0, xtol=1e-15, rtol=8.9e-16)
        verts = gnomonic_inverse(lam * wh)
        try:
            poly = build_spherical_polygon(verts)
        except (NotConvexSpherical, DegenerateEdge, AntipodalEdge):
            continue
        if abs(poly.perimeter - target_length) > 1e-10:
            continue
        return poly.with_base(rng.uniform(0.0, poly.perimeter))
    raise RuntimeError(
        f"could not generate a convex link of length {target_length} "
        f"after {max_attempts} attempts"
    )
