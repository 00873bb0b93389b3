"""Closed convex polygonal curves with arc-length parametrization.

A :class:`PlanarPolygon` is a simple closed convex counterclockwise polygon
together with a marked base point given as an arc-length position.  All
curve queries (``point_at``, semitangents, turning) measure arc length
counterclockwise from the base point; the base point itself may sit in the
interior of an edge.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DegenerateEdge,
    DegenerateResult,
    NotConvex,
    NotSimple,
    WrongOrientation,
)
from .geometry import TAU, Angle, Vec2, norm_angle

# Edges shorter than LENGTH_EPS_FACTOR * perimeter are rejected; vertices
# whose exterior angle is below the collinear tolerance are merged away.
LENGTH_EPS_FACTOR = 1e-12
COLLINEAR_EPS = 1e-12
# Arc positions within SNAP_FACTOR * perimeter of a vertex are treated as
# the vertex itself: reducing (base + s) mod perimeter costs a few ulps,
# which must not flip a query onto the wrong side of a semitangent jump.
SNAP_FACTOR = 32 * np.finfo(float).eps


def default_certificate_tolerance() -> float:
    """Certificate tolerance: 1e-9 unless overridden via ISOCOMB_TOL."""
    raw = os.environ.get("ISOCOMB_TOL")
    if raw is None:
        return 1e-9
    return float(raw)


def _reduce_mod(t: float, period: float) -> float:
    """Reduce ``t`` into [0, period); exact for t already in range."""
    if 0.0 <= t < period:
        return t
    t = math.fmod(t, period)
    if t < 0.0:
        t += period
    if t >= period:
        t = 0.0
    return t


def signed_area(vertices: np.ndarray) -> float:
    """Signed area of a closed vertex chain (positive = counterclockwise)."""
    x = vertices[:, 0]
    y = vertices[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _edge_angles(vertices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge lengths and direction angles; edge i runs v[i] -> v[i+1]."""
    diffs = np.roll(vertices, -1, axis=0) - vertices
    lengths = np.hypot(diffs[:, 0], diffs[:, 1])
    dirs = np.arctan2(diffs[:, 1], diffs[:, 0])
    return lengths, dirs


def _exterior_angles(dirs: np.ndarray) -> np.ndarray:
    """Exterior angle at vertex i: turn from edge i-1 to edge i, in (-pi, pi]."""
    turns = dirs - np.roll(dirs, 1)
    turns = np.mod(turns, TAU)
    turns[turns > math.pi] -= TAU
    return turns


@dataclass(frozen=True)
class PlanarPolygon:
    """Validated convex polygon.  Build with :func:`build_polygon`."""

    vertices: np.ndarray          # (n, 2), counterclockwise
    cum_lengths: np.ndarray       # (n,), arc length at each vertex, [0]=0
    perimeter: float
    base_s: float                 # arc position of the marked point, in [0, perimeter)
    edge_dirs: np.ndarray = field(repr=False, default=None)  # (n,) direction angles

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def exterior_angles(self) -> np.ndarray:
        return _exterior_angles(self.edge_dirs)

    def vertex_positions(self) -> np.ndarray:
        """Arc positions of the vertices measured from the base point."""
        pos = self.cum_lengths - self.base_s
        return np.where(pos < 0.0, pos + self.perimeter, pos)

    def with_base(self, base_s: float) -> "PlanarPolygon":
        """Same polygon, base point moved to arc position ``base_s``."""
        return replace(self, base_s=_reduce_mod(base_s, self.perimeter))


def build_polygon(vertices, base_s: float = 0.0, *, collinear_eps: float = COLLINEAR_EPS) -> PlanarPolygon:
    """Validate a vertex chain and construct a :class:`PlanarPolygon`.

    Vertices must be counterclockwise and in convex position.  Vertices
    whose exterior angle is at most ``collinear_eps`` are merged away, so
    every stored vertex is a genuine corner.

    Raises:
        DegenerateEdge: consecutive vertices closer than 1e-12 * perimeter.
        WrongOrientation: clockwise input.
        NotConvex: reflex vertex, zero area, or a full reversal.
        NotSimple: locally convex chain winding more than once.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
        raise ValueError("expected at least 3 planar vertices of shape (n, 2)")
    if not np.all(np.isfinite(verts)):
        raise ValueError("vertices must be finite")

    lengths, dirs = _edge_angles(verts)
    perimeter = float(np.sum(lengths))
    if perimeter <= 0.0:
        raise DegenerateEdge("zero perimeter")
    if np.any(lengths < LENGTH_EPS_FACTOR * perimeter):
        raise DegenerateEdge("consecutive vertices coincide within tolerance")

    area = signed_area(verts)
    if area < 0.0:
        raise WrongOrientation("vertices are clockwise; expected counterclockwise")
    if area == 0.0:
        raise NotConvex("polygon has zero area")

    # Merge collinear vertices until stable.
    while True:
        turns = _exterior_angles(dirs)
        if np.any(turns < -collinear_eps):
            raise NotConvex(f"reflex vertex: min exterior angle {turns.min():.3e}")
        if np.any(turns >= math.pi - 1e-12):
            raise NotConvex("degenerate reversal at a vertex")
        keep = np.abs(turns) > collinear_eps
        if keep.all():
            break
        if keep.sum() < 3:
            raise NotConvex("fewer than 3 corners after collinear merge")
        first_kept = int(np.argmax(keep))
        offset = float(np.sum(lengths[:first_kept]))  # arc from old v0 to new v0
        verts = verts[keep]
        lengths, dirs = _edge_angles(verts)
        perimeter = float(np.sum(lengths))
        base_s = base_s - offset

    total_turn = float(np.sum(_exterior_angles(dirs)))
    if abs(total_turn - TAU) > 1e-9:
        raise NotSimple(f"total turning {total_turn:.12f} != 2*pi; chain is not simple")

    cum = np.concatenate([[0.0], np.cumsum(lengths[:-1])])
    return PlanarPolygon(
        vertices=verts,
        cum_lengths=cum,
        perimeter=perimeter,
        base_s=_reduce_mod(base_s, perimeter),
        edge_dirs=dirs,
    )


def _locate(poly: PlanarPolygon, s: float) -> tuple[int, float]:
    """Edge index and offset along it for arc position ``s`` from the base."""
    x = _reduce_mod(poly.base_s + s, poly.perimeter)
    i = int(np.searchsorted(poly.cum_lengths, x, side="right")) - 1
    u = x - poly.cum_lengths[i]
    snap = SNAP_FACTOR * poly.perimeter
    if u <= snap:
        return i, 0.0
    nxt = poly.cum_lengths[i + 1] if i + 1 < poly.n_vertices else poly.perimeter
    if nxt - x <= snap:
        return (i + 1) % poly.n_vertices, 0.0
    return i, u


def point_at(poly: PlanarPolygon, s: float) -> Vec2:
    """Point at arc length ``s`` from the marked point (s reduced mod perimeter)."""
    i, u = _locate(poly, s)
    v = poly.vertices[i]
    if u == 0.0:
        return Vec2(float(v[0]), float(v[1]))
    d = poly.edge_dirs[i]
    return Vec2(float(v[0] + u * math.cos(d)), float(v[1] + u * math.sin(d)))


def points_at(poly: PlanarPolygon, ss: np.ndarray) -> np.ndarray:
    """Vectorized :func:`point_at` for an array of arc positions."""
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
    base = poly.vertices[idx]
    d = poly.edge_dirs[idx]
    return base + u[:, None] * np.stack([np.cos(d), np.sin(d)], axis=1)


def right_semitangent(poly: PlanarPolygon, s: float) -> Angle:
    """Direction angle of the forward tangent; outgoing edge at a vertex."""
    i, _ = _locate(poly, s)
    return norm_angle(float(poly.edge_dirs[i]))


def left_semitangent(poly: PlanarPolygon, s: float) -> Angle:
    """Direction angle of the incoming edge (left-continuous in ``s``)."""
    i, u = _locate(poly, s)
    if u == 0.0:
        i = (i - 1) % poly.n_vertices
    return norm_angle(float(poly.edge_dirs[i]))


@dataclass(frozen=True)
class TurningFunction:
    """Right-continuous step function: cumulative turning vs arc length.

    ``values[k]`` is the turning at and after ``breakpoints[k]``; the value
    before the first breakpoint is 0.  A vertex sitting exactly at the base
    point contributes its jump at arc length ``perimeter``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    perimeter: float

    def evaluate(self, s: float) -> float:
        x = _reduce_mod(s, self.perimeter) if s != self.perimeter else self.perimeter
        i = int(np.searchsorted(self.breakpoints, x, side="right")) - 1
        return 0.0 if i < 0 else float(self.values[i])

    def total_increase(self) -> float:
        return float(self.values[-1])

    def jumps(self) -> np.ndarray:
        return np.diff(np.concatenate([[0.0], self.values]))


def turning_function(poly: PlanarPolygon) -> TurningFunction:
    """Cumulative turning of the curve from the base point."""
    pos = poly.vertex_positions()
    pos = np.where(pos == 0.0, poly.perimeter, pos)
    order = np.argsort(pos, kind="stable")
    turns = poly.exterior_angles()[order]
    return TurningFunction(pos[order], np.cumsum(turns), poly.perimeter)


@dataclass(frozen=True)
class ConvexityCertificate:
    """Numerical convexity witness for a closed vertex chain."""

    interior_angles: np.ndarray
    exterior_sum: float
    min_exterior: float
    is_convex: bool
    tolerance: float

    def summary(self) -> dict:
        return {
            "exterior_sum": self.exterior_sum,
            "min_exterior": self.min_exterior,
            "is_convex": bool(self.is_convex),
            "tolerance": self.tolerance,
        }


FAILED_CERTIFICATE = ConvexityCertificate(
    interior_angles=np.empty(0),
    exterior_sum=float("nan"),
    min_exterior=float("nan"),
    is_convex=False,
    tolerance=float("nan"),
)


def convexity_certificate(vertices, tolerance: float) -> ConvexityCertificate:
    """Certify (never enforce) convexity of a closed chain.

    Reports interior angles, the exterior-angle sum and minimum, and an
    ``is_convex`` verdict at the given tolerance.  Non-convex input is a
    valid query; only coincident consecutive vertices raise.
    """
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
        raise ValueError("expected at least 3 planar vertices of shape (n, 2)")
    lengths, dirs = _edge_angles(verts)
    perimeter = float(np.sum(lengths))
    if perimeter <= 0.0 or np.any(lengths < LENGTH_EPS_FACTOR * perimeter):
        raise DegenerateEdge("consecutive vertices coincide within tolerance")
    turns = _exterior_angles(dirs)
    exterior_sum = float(np.sum(turns))
    min_exterior = float(np.min(turns))
    simple_ok = signed_area(verts) > 0.0 and abs(exterior_sum - TAU) <= tolerance
    is_convex = simple_ok and min_exterior >= -tolerance
    return ConvexityCertificate(
        interior_angles=math.pi - turns,
        exterior_sum=exterior_sum,
        min_exterior=min_exterior,
        is_convex=is_convex,
        tolerance=tolerance,
    )


def inscribe(poly: PlanarPolygon, n: int) -> PlanarPolygon:
    """Polygon through n equally spaced points of the curve, base kept at sample 0.

    Collinear and duplicate samples are merged by the builder; fewer than
    three surviving corners raises DegenerateResult.
    """
    if n < 3:
        raise ValueError("inscribe requires n >= 3")
    samples = points_at(poly, np.arange(n) * (poly.perimeter / n))
    try:
        return build_polygon(samples, base_s=0.0)
    except (NotConvex, DegenerateEdge) as exc:
        raise DegenerateResult(f"inscribed {n}-gon degenerates: {exc}") from exc


def dilate_to_perimeter(poly: PlanarPolygon, target: float, center) -> PlanarPolygon:
    """Homothety about ``center`` scaling the perimeter to ``target``."""
    if target <= 0.0:
        raise ValueError("target perimeter must be positive")
    ratio = target / poly.perimeter
    c = np.asarray(center, dtype=float)
    return build_polygon(c + ratio * (poly.vertices - c), base_s=poly.base_s * ratio)
