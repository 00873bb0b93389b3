"""Convex cones in 3-space, the pairwise Pogorelov transform, and digons.

A convex cone with apex at the origin is encoded by its link, the convex
spherical polygon cut out on the unit sphere.  Two cones of equal link
length are intrinsically isometric, corresponding by link arc length.  The
pairwise transform sends a corresponding pair of spherical points to the
plane by projecting out the x0 coordinate and dividing by the summed
heights; it maps a pair of convex spherical curves to a pair of convex,
mutually isometric planar curves, which reduces cone positioning to the
planar alignment problem restricted to rotations about the x0-axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AntipodalCorrespondence,
    AntipodalEdge,
    DegenerateEdge,
    NonPositiveHeight,
    NotConvex,
    NotConvexPlanar,
    NotConvexSpherical,
    NotSimple,
    PerimeterMismatch,
    PositioningNotFound,
    TruncationTooDeep,
)
from .geometry import (
    E0,
    TAU,
    Angle,
    norm_angle,
    rotate_about_x0_many,
    rotation_matrix_from_to,
)
from .planar import PlanarPolygon, build_polygon
from .spherical import (
    SphericalPolygon,
    build_spherical_polygon,
    centroid_direction,
    sph_points_at,
    unit_rows,
)

HEIGHT_EPS = 1e-6
DEFAULT_SUBDIVISIONS = 256          # max_step = perimeter / 256
IMAGE_COLLINEAR_EPS = 1e-9          # sampling-noise floor for transformed images
COMBINE_MERGE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ConvexCone3:
    """Cone {t * r(s) : t >= 0} over a convex spherical link."""

    link: SphericalPolygon


def cone_from_link(link: SphericalPolygon) -> ConvexCone3:
    """Wrap a validated link; cones of equal link perimeter are isometric."""
    return ConvexCone3(link)


# -- pairwise Pogorelov transform ------------------------------------------------

def pogorelov_forward(r1, r2, height_eps: float = HEIGHT_EPS):
    """Planar image pair (rbar1, rbar2) / (x0_1 + x0_2) of two unit vectors.

    Raises:
        NonPositiveHeight: if the height sum is at or below ``height_eps``.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    denom = r1[0] + r2[0]
    if denom <= height_eps:
        raise NonPositiveHeight(f"x0 sum {denom!r} <= {height_eps}")
    return r1[1:] / denom, r2[1:] / denom


def pogorelov_inverse(tilde_sum) -> np.ndarray:
    """Unit vector with gnomonic-style coordinates ``tilde_sum`` over x0."""
    w = np.asarray(tilde_sum, dtype=float)
    x0 = 1.0 / math.sqrt(1.0 + float(w @ w))
    return np.array([x0, w[0] * x0, w[1] * x0])


def pogorelov_identity_check(r1, r2, height_eps: float = HEIGHT_EPS) -> float:
    """Max componentwise spread of three routes to the combined direction.

    Compares (a) the inverse transform of the summed forward images,
    (b) the closed form (rbar1 + rbar2, x0_1 + x0_2) / sqrt(2 (1 + <r1, r2>)),
    and (c) the normalized sum of the inputs.
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    w1, w2 = pogorelov_forward(r1, r2, height_eps)
    a = pogorelov_inverse(w1 + w2)
    s = r1 + r2
    b = np.concatenate([[r1[0] + r2[0]], r1[1:] + r2[1:]]) / math.sqrt(
        2.0 * (1.0 + float(r1 @ r2))
    )
    c = s / np.linalg.norm(s)
    return float(
        max(np.max(np.abs(a - b)), np.max(np.abs(b - c)), np.max(np.abs(a - c)))
    )


def _merged_link_positions(L1: SphericalPolygon, L2: SphericalPolygon, merge_rtol: float) -> np.ndarray:
    p = L1.perimeter
    pos = np.sort(np.concatenate([[0.0], L1.vertex_positions(), L2.vertex_positions()]))
    tol = merge_rtol * p
    out = [pos[0]]
    for x in pos[1:]:
        if x - out[-1] > tol:
            out.append(x)
    if len(out) > 1 and p - out[-1] <= tol:
        out.pop()
    return np.array(out)


def _refine(positions: np.ndarray, period: float, max_step: float) -> np.ndarray:
    """Subdivide each gap (including the wraparound) to at most max_step."""
    ends = np.concatenate([positions[1:], [period]])
    chunks = []
    for a, b in zip(positions, ends):
        k = max(1, int(math.ceil((b - a) / max_step)))
        chunks.append(a + (b - a) * np.arange(k) / k)
    return np.concatenate(chunks)


@dataclass(frozen=True, eq=False)
class PogorelovImage:
    """Planar image pair of two corresponded spherical curves.

    ``planar1``/``planar2`` are the validated convex image polygons; they
    are None when the transform was run with ``certify=False`` (the raw
    samples in ``image1``/``image2`` are always present).
    """

    planar1: PlanarPolygon | None
    planar2: PlanarPolygon | None
    x0_sums: np.ndarray         # (m,) height denominators per breakpoint
    projections: np.ndarray     # (m, 2, 2) raw (x1, x2) projections of r1, r2
    positions: np.ndarray = field(default=None)   # (m,) arc positions sampled
    image1: np.ndarray = field(default=None)      # (m, 2) transformed samples of M1
    image2: np.ndarray = field(default=None)      # (m, 2) transformed samples of M2


def transform_link_pair(
    M1: SphericalPolygon,
    M2: SphericalPolygon,
    max_step: float | None = None,
    height_eps: float = HEIGHT_EPS,
    include_vertices: bool = True,
    certify: bool = True,
) -> PogorelovImage:
    """Map an equal-length spherical pair to the plane, breakpoint by breakpoint.

    The correspondence is by arc length from the base points; the merged
    vertex set is refined so no gap exceeds ``max_step`` (default
    perimeter/256).  On each piece between correspondence events both
    height profiles are trigonometric in the same parameter, so the images
    of geodesic edges are exactly straight and the built planar polygons
    recover the true image vertices.  Resolution studies of the pairwise
    isometry pass ``include_vertices=False`` to sample a plain uniform
    grid instead (segments then straddle the corners).  Both image
    polygons are validated convex.

    Raises:
        PerimeterMismatch, NonPositiveHeight, NotConvexPlanar
    """
    p = M1.perimeter
    if abs(p - M2.perimeter) > 1e-9 * p:
        raise PerimeterMismatch(f"link perimeters {p!r} and {M2.perimeter!r} differ")
    if max_step is None:
        max_step = p / DEFAULT_SUBDIVISIONS
    if include_vertices:
        positions = _refine(_merged_link_positions(M1, M2, 1e-12), p, max_step)
    else:
        n = max(4, int(math.ceil(p / max_step)))
        positions = np.arange(n) * (p / n)
    r1 = sph_points_at(M1, positions)
    r2 = sph_points_at(M2, positions)
    if np.min(r1[:, 0]) <= height_eps or np.min(r2[:, 0]) <= height_eps:
        raise NonPositiveHeight("a sampled point has x0 at or below the height floor")
    denom = r1[:, 0] + r2[:, 0]
    w1 = r1[:, 1:] / denom[:, None]
    w2 = r2[:, 1:] / denom[:, None]
    planar1 = planar2 = None
    if certify:
        try:
            planar1 = build_polygon(w1, base_s=0.0, collinear_eps=IMAGE_COLLINEAR_EPS)
            planar2 = build_polygon(w2, base_s=0.0, collinear_eps=IMAGE_COLLINEAR_EPS)
        except (NotConvex, NotSimple, DegenerateEdge) as exc:
            raise NotConvexPlanar(
                f"transformed image failed convex validation ({exc}); "
                "resolution too coarse or invalid input"
            ) from exc
    return PogorelovImage(
        planar1=planar1,
        planar2=planar2,
        x0_sums=denom,
        projections=np.stack([r1[:, 1:], r2[:, 1:]], axis=1),
        positions=positions,
        image1=w1,
        image2=w2,
    )


def segment_mismatch(image: PogorelovImage) -> float:
    """Max difference of corresponding image chord lengths (isometry defect)."""
    d1 = np.roll(image.image1, -1, axis=0) - image.image1
    d2 = np.roll(image.image2, -1, axis=0) - image.image2
    return float(np.max(np.abs(np.hypot(d1[:, 0], d1[:, 1]) - np.hypot(d2[:, 0], d2[:, 1]))))


# -- cone combination --------------------------------------------------------------

def combine_cones(
    K1: ConvexCone3,
    K2: ConvexCone3,
    *,
    collinear_eps: float = IMAGE_COLLINEAR_EPS,
    antipodal_eps: float = 1e-9,
) -> ConvexCone3:
    """Isometric combination: the cone over normalized r1(s) + r2(s).

    Between correspondence events the summed generators stay in a fixed
    plane through the origin, so the combined link is again a geodesic
    polygon with vertices exactly at the merged breakpoints.

    Raises:
        PerimeterMismatch, AntipodalCorrespondence, NotConvexSpherical
    """
    L1, L2 = K1.link, K2.link
    p = L1.perimeter
    if abs(p - L2.perimeter) > 1e-9 * p:
        raise PerimeterMismatch(f"link perimeters {p!r} and {L2.perimeter!r} differ")
    positions = _merged_link_positions(L1, L2, COMBINE_MERGE_RTOL)
    ends = np.concatenate([positions[1:], [p]])
    check = np.concatenate([positions, 0.5 * (positions + ends)])
    sums = sph_points_at(L1, check) + sph_points_at(L2, check)
    norms = np.linalg.norm(sums, axis=1)
    if np.min(norms) < antipodal_eps:
        raise AntipodalCorrespondence(
            f"|r1 + r2| = {norms.min():.3e} at arc {check[int(np.argmin(norms))]!r}"
        )
    m = len(positions)
    link = build_spherical_polygon(
        sums[:m] / norms[:m, None], base_s=0.0, collinear_eps=collinear_eps
    )
    return ConvexCone3(link)


# -- positioning pipeline -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PositioningReport:
    """Outcome of the cone positioning search."""

    psi: Angle                  # rotation of the first cone about the x0-axis
    sigma0: float               # arc position whose image tangents were matched
    margin: Angle               # planar semitangent margin of the candidate
    combined: ConvexCone3
    cone1: ConvexCone3          # centroid-normalized, rotated by psi
    cone2: ConvexCone3          # centroid-normalized
    image: PogorelovImage       # transform of the final positioned pair
    candidates_tried: int


def normalize_cone(K: ConvexCone3) -> tuple[ConvexCone3, np.ndarray]:
    """Rotate a cone so its link's centroid direction is the +x0 axis."""
    rot = rotation_matrix_from_to(centroid_direction(K.link), E0)
    link = build_spherical_polygon(K.link.vertices @ rot.T, base_s=K.link.base_s)
    return ConvexCone3(link), rot


def _image_directions(samples: np.ndarray) -> np.ndarray:
    """Unwrapped chord direction angles of a closed planar sample loop."""
    d = np.roll(samples, -1, axis=0) - samples
    return np.unwrap(np.arctan2(d[:, 1], d[:, 0]))


def position_and_combine(
    K1: ConvexCone3,
    K2: ConvexCone3,
    max_step: float | None = None,
    margin_eps: float = 1e-9,
) -> PositioningReport:
    """Rotate K1 about the x0-axis until the combination certifies convex.

    Pipeline: centroid-normalize both cones; transform the link pair to the
    plane; enumerate candidate rotations from tangent matching at each
    breakpoint (rotating the first cone about x0 rotates its image rigidly
    and leaves the height sums untouched); keep candidates whose planar
    semitangent margin is positive, in increasing breakpoint order; accept
    the first whose combined link passes the spherical convexity and
    Gauss-Bonnet certificate.

    Raises:
        PositioningNotFound: if no candidate certifies.
    """
    C1, _ = normalize_cone(K1)
    C2, _ = normalize_cone(K2)
    # the raw image samples drive the candidate search; image convexity is
    # not required because every candidate is certified on the sphere
    image = transform_link_pair(C1.link, C2.link, max_step=max_step, certify=False)
    th1 = _image_directions(image.image1)
    th2 = _image_directions(image.image2)
    g = th1 - th2
    d = np.mod(g[None, :] - g[:, None], TAU)
    gaps = np.pi - np.abs(d - np.pi)
    margins = math.pi - gaps.max(axis=1)

    tried = 0
    for j in np.nonzero(margins > margin_eps)[0]:
        tried += 1
        psi = norm_angle(float(th2[j] - th1[j]))
        link1 = build_spherical_polygon(
            rotate_about_x0_many(psi, C1.link.vertices), base_s=C1.link.base_s
        )
        rotated = ConvexCone3(link1)
        try:
            combined = combine_cones(rotated, C2)
        except (NotConvexSpherical, AntipodalCorrespondence, DegenerateEdge, AntipodalEdge):
            continue
        final_image = transform_link_pair(link1, C2.link, max_step=max_step, certify=False)
        return PositioningReport(
            psi=psi,
            sigma0=float(image.positions[j]),
            margin=float(margins[j]),
            combined=combined,
            cone1=rotated,
            cone2=C2,
            image=final_image,
            candidates_tried=tried,
        )
    raise PositioningNotFound(
        f"no certified candidate among {tried} with margin > {margin_eps} "
        f"(best margin {margins.max():.3e})"
    )


def position_cones(
    K1: ConvexCone3, K2: ConvexCone3, max_step: float | None = None
) -> tuple[Angle, float]:
    """Rotation about x0 and matched arc position; see position_and_combine."""
    report = position_and_combine(K1, K2, max_step=max_step)
    return report.psi, report.sigma0


# -- digons and dihedral angles ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Digon:
    """Spherical lune stored symbolically: opening angle plus placement.

    The standard digon has vertices at (0, 0, +-1) and edges in the half
    planes at azimuth +-angle/2 around the +x0 direction, so digons of
    increasing angle are nested around the x0-axis.
    """

    angle: float
    placement: np.ndarray = field(default_factory=lambda: np.eye(3))

    @property
    def perimeter(self) -> float:
        return TAU


def make_digon(angle: float, placement: np.ndarray | None = None) -> Digon:
    """Digon of the given dihedral angle; the angle must lie strictly in (0, pi)."""
    if not 0.0 < angle < math.pi:
        raise ValueError(f"digon angle must lie strictly in (0, pi); got {angle!r}")
    if placement is None:
        placement = np.eye(3)
    return Digon(float(angle), np.asarray(placement, dtype=float))


def _digon_quadrilateral(digon: Digon, eps: float) -> SphericalPolygon:
    """Quadrilateral obtained by cutting both digon vertices at depth eps."""
    if not 0.0 < eps < math.pi / 2:
        raise TruncationTooDeep(f"cut depth {eps!r} outside (0, pi/2)")
    half = digon.angle / 2.0
    north = np.array([0.0, 0.0, 1.0])
    ea = np.array([math.cos(half), math.sin(half), 0.0])
    eb = np.array([math.cos(half), -math.sin(half), 0.0])
    ce, se = math.cos(eps), math.sin(eps)
    a1 = ce * north + se * ea
    a2 = -ce * north + se * ea
    b1 = ce * north + se * eb
    b2 = -ce * north + se * eb
    corners = np.stack([a2, a1, b1, b2]) @ digon.placement.T
    return build_spherical_polygon(corners)


def _solve_truncation(
    digon1: Digon, digon2: Digon, eps: float
) -> tuple[SphericalPolygon, SphericalPolygon, float]:
    from scipy.optimize import brentq

    if not 0.0 < eps < math.pi / 4:
        raise TruncationTooDeep(f"cut depth {eps!r} outside (0, pi/4)")
    q1 = _digon_quadrilateral(digon1, eps)
    target = q1.perimeter

    def f(e2: float) -> float:
        return _digon_quadrilateral(digon2, e2).perimeter - target

    # the perimeter is strictly decreasing in the cut depth, from ~2*pi at
    # depth 0 down to ~twice the digon angle near pi/2
    lo, hi = 1e-6, math.pi / 2 - 1e-3
    if f(lo) * f(hi) > 0.0:
        raise TruncationTooDeep(
            f"no cut depth of the second digon matches perimeter {target!r}"
        )
    e2 = float(brentq(f, lo, hi, xtol=1e-15, rtol=8.9e-16))
    q2 = _digon_quadrilateral(digon2, e2)
    if abs(q2.perimeter - target) > 1e-12 * target:
        raise TruncationTooDeep("perimeter equalization did not converge")
    return q1, q2, e2


def truncate_digons(digon1: Digon, digon2: Digon, eps: float) -> tuple[SphericalPolygon, SphericalPolygon]:
    """Cut both digons into spherical quadrilaterals of equal perimeter.

    The first digon is cut at depth ``eps``; the second's cut depth is
    solved by bisection so the perimeters match to 1e-12 relative.

    Raises:
        TruncationTooDeep: eps outside (0, pi/4) or no matching depth exists.
    """
    q1, q2, _ = _solve_truncation(digon1, digon2, eps)
    return q1, q2


def link_hausdorff(a: SphericalPolygon, b: SphericalPolygon, n: int = 1024) -> float:
    """Symmetric geodesic Hausdorff distance between two links (sampled)."""
    sa = sph_points_at(a, np.arange(n) * (a.perimeter / n))
    sb = sph_points_at(b, np.arange(n) * (b.perimeter / n))
    dots = np.clip(sa @ sb.T, -1.0, 1.0)
    dist = np.arccos(dots)
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


@dataclass(frozen=True, eq=False)
class DigonLevel:
    """One rung of the digon truncation ladder."""

    eps1: float
    eps2: float
    perimeter: float
    psi: Angle
    sigma0: float
    margin: Angle
    min_turning: float
    gauss_bonnet_residual: float
    combined_link: SphericalPolygon


@dataclass(frozen=True, eq=False)
class DigonCombinationReport:
    levels: list[DigonLevel]
    hausdorff: list[float]      # distances between successive combined links


def combine_dihedral(digon1: Digon, digon2: Digon, eps_ladder) -> DigonCombinationReport:
    """Truncate, position, and combine along a decreasing ladder of cut depths."""
    eps_ladder = [float(e) for e in eps_ladder]
    if not eps_ladder or any(e <= 0 for e in eps_ladder):
        raise ValueError("eps ladder must be positive")
    if any(b >= a for a, b in zip(eps_ladder, eps_ladder[1:])):
        raise ValueError("eps ladder must be strictly decreasing")
    levels = []
    for eps in eps_ladder:
        q1, q2, e2 = _solve_truncation(digon1, digon2, eps)
        report = position_and_combine(cone_from_link(q1), cone_from_link(q2))
        link = report.combined.link
        levels.append(
            DigonLevel(
                eps1=eps,
                eps2=e2,
                perimeter=q1.perimeter,
                psi=report.psi,
                sigma0=report.sigma0,
                margin=report.margin,
                min_turning=link.min_turning(),
                gauss_bonnet_residual=link.gauss_bonnet_residual,
                combined_link=link,
            )
        )
    hausdorff = [
        link_hausdorff(a.combined_link, b.combined_link)
        for a, b in zip(levels, levels[1:])
    ]
    return DigonCombinationReport(levels=levels, hausdorff=hausdorff)
