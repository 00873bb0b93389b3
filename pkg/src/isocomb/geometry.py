"""Elementary 2D/3D vector algebra, angles, and planar rigid motions.

Conventions used throughout the package:

* all reals are 64-bit floats;
* direction angles are normalized to (-pi, pi]; cumulative turnings are
  kept unwrapped;
* 3-vectors are ordered (x0, x1, x2) and the distinguished axis e0 is
  the first coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

TAU = 2.0 * math.pi

E0 = np.array([1.0, 0.0, 0.0])


class Vec2(NamedTuple):
    x: float
    y: float


class Vec3(NamedTuple):
    x0: float
    x1: float
    x2: float


# An angle in radians.  Direction angles live in (-pi, pi]; unwrapped
# turnings are unrestricted.
Angle = float


def norm_angle(theta: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    t = math.fmod(theta, TAU)
    if t <= -math.pi:
        t += TAU
    elif t > math.pi:
        t -= TAU
    return t


def circ_dist(a: Angle, b: Angle) -> Angle:
    """Minimal absolute difference of two angles modulo 2*pi, in [0, pi]."""
    d = math.fmod(a - b, TAU)
    return abs(norm_angle(d))


def circ_dist_many(a, b) -> np.ndarray:
    """Vectorized :func:`circ_dist` on arrays (broadcasting)."""
    d = np.mod(np.asarray(a) - np.asarray(b), TAU)
    return np.pi - np.abs(d - np.pi)


def angle_between(u, v) -> Angle:
    """Unsigned angle in [0, pi] between two nonzero vectors (2D or 3D).

    The normalized dot product is clamped to [-1, 1] before the arccos so
    rounding never produces a domain error.

    Raises:
        ValueError: if either vector is zero.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("angle_between requires nonzero vectors")
    c = float(np.dot(u, v)) / (nu * nv)
    return math.acos(min(1.0, max(-1.0, c)))


@dataclass(frozen=True)
class RigidMotion2:
    """Orientation-preserving isometry of the plane: rotate, then translate."""

    rotation: Angle = 0.0
    translation: Vec2 = Vec2(0.0, 0.0)

    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return np.array([[c, -s], [s, c]])


IDENTITY_MOTION = RigidMotion2()


def apply_motion(m: RigidMotion2, p) -> Vec2:
    """Rotate ``p`` about the origin by ``m.rotation``, then translate."""
    x, y = float(p[0]), float(p[1])
    c, s = math.cos(m.rotation), math.sin(m.rotation)
    return Vec2(c * x - s * y + m.translation[0], s * x + c * y + m.translation[1])


def apply_motion_many(m: RigidMotion2, pts: np.ndarray) -> np.ndarray:
    """Apply a rigid motion to an (n, 2) array of points."""
    pts = np.asarray(pts, dtype=float)
    out = pts @ m.matrix().T
    out[:, 0] += m.translation[0]
    out[:, 1] += m.translation[1]
    return out


def compose(m1: RigidMotion2, m2: RigidMotion2) -> RigidMotion2:
    """Motion equal to applying ``m2`` first, then ``m1``."""
    t = apply_motion(m1, m2.translation)
    return RigidMotion2(norm_angle(m1.rotation + m2.rotation), Vec2(t.x, t.y))


def invert(m: RigidMotion2) -> RigidMotion2:
    """Inverse motion: apply_motion(invert(m), apply_motion(m, p)) == p."""
    c, s = math.cos(m.rotation), math.sin(m.rotation)
    tx, ty = m.translation
    return RigidMotion2(norm_angle(-m.rotation), Vec2(-(c * tx + s * ty), -(-s * tx + c * ty)))


def rotate_about_x0(psi: Angle, p) -> Vec3:
    """Rotate a 3-vector about the x0-axis; the x0 component is untouched."""
    x0, x1, x2 = float(p[0]), float(p[1]), float(p[2])
    c, s = math.cos(psi), math.sin(psi)
    return Vec3(x0, c * x1 - s * x2, s * x1 + c * x2)


def rotate_about_x0_many(psi: Angle, pts: np.ndarray) -> np.ndarray:
    """Rotate an (n, 3) array about the x0-axis."""
    pts = np.asarray(pts, dtype=float)
    c, s = math.cos(psi), math.sin(psi)
    out = np.empty_like(pts)
    out[:, 0] = pts[:, 0]
    out[:, 1] = c * pts[:, 1] - s * pts[:, 2]
    out[:, 2] = s * pts[:, 1] + c * pts[:, 2]
    return out


def rotation_matrix_from_to(a, b) -> np.ndarray:
    """3x3 rotation taking unit vector ``a`` to unit vector ``b``.

    Uses the Rodrigues formula about ``a x b``; for (anti)parallel inputs
    it falls back to the identity or a half-turn about any orthogonal axis.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    axis = np.cross(a, b)
    s = float(np.linalg.norm(axis))
    c = float(np.dot(a, b))
    if s < 1e-15:
        if c > 0.0:
            return np.eye(3)
        # half turn about an axis orthogonal to a
        helper = np.array([1.0, 0.0, 0.0])
        if abs(a[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        axis = np.cross(a, helper)
        axis /= np.linalg.norm(axis)
        return 2.0 * np.outer(axis, axis) - np.eye(3)
    axis /= s
    k = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + s * k + (1.0 - c) * (k @ k)
