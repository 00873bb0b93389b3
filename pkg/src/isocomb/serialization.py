"""JSON schemas for curves, digons, and alignment results.

Planar polygon:   {"type": "planar_polygon", "vertices": [[x, y], ...], "base_s": s}
Spherical polygon:{"type": "spherical_polygon", "vertices": [[x0, x1, x2], ...], "base_s": s}
Digon:            {"type": "digon", "angle": a, "placement": [rx, ry, rz]}  (rotation vector)

Alignment result:
  {"alignment": {"sigma0": ..., "rotation": ..., "translation": [x, y], "margin": ...} | null,
   "combined": {"vertices": [[x, y], ...], "certificate": {...}},
   "bending_residual": ...}
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .combination import AlignmentResult, CombinedCurve
from .cones import Digon, make_digon
from .planar import PlanarPolygon, build_polygon
from .spherical import SphericalPolygon, build_spherical_polygon


def planar_to_dict(poly: PlanarPolygon) -> dict:
    return {
        "type": "planar_polygon",
        "vertices": poly.vertices.tolist(),
        "base_s": poly.base_s,
    }


def spherical_to_dict(poly: SphericalPolygon) -> dict:
    return {
        "type": "spherical_polygon",
        "vertices": poly.vertices.tolist(),
        "base_s": poly.base_s,
    }


def digon_to_dict(digon: Digon) -> dict:
    from scipy.spatial.transform import Rotation

    return {
        "type": "digon",
        "angle": digon.angle,
        "placement": Rotation.from_matrix(digon.placement).as_rotvec().tolist(),
    }


def object_from_dict(data: dict) -> Any:
    """Construct (and fully validate) a geometry object from its JSON dict."""
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError("expected an object with a 'type' field")
    kind = data["type"]
    if kind == "planar_polygon":
        return build_polygon(data["vertices"], base_s=float(data.get("base_s", 0.0)))
    if kind == "spherical_polygon":
        return build_spherical_polygon(data["vertices"], base_s=float(data.get("base_s", 0.0)))
    if kind == "digon":
        from scipy.spatial.transform import Rotation

        placement = data.get("placement")
        matrix = None
        if placement is not None:
            matrix = Rotation.from_rotvec(np.asarray(placement, dtype=float)).as_matrix()
        return make_digon(float(data["angle"]), matrix)
    raise ValueError(f"unknown object type {kind!r}")


def load_object(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return object_from_dict(json.load(fh))


def dump_json(data: dict, path: str | None) -> str:
    """Serialize with full float precision; write to ``path`` when given."""
    text = json.dumps(data, indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def alignment_result_to_dict(
    alignment: AlignmentResult | None,
    combined: CombinedCurve,
    bending_residual: float,
) -> dict:
    cert = combined.certificate
    return {
        "alignment": None
        if alignment is None
        else {
            "sigma0": alignment.sigma0,
            "rotation": alignment.motion.rotation,
            "translation": [alignment.motion.translation[0], alignment.motion.translation[1]],
            "margin": alignment.margin,
        },
        "combined": {
            "vertices": np.asarray(combined.curve).tolist(),
            "certificate": {
                "interior_angles": np.asarray(cert.interior_angles).tolist(),
                "exterior_sum": cert.exterior_sum,
                "min_exterior": cert.min_exterior,
                "is_convex": bool(cert.is_convex),
                "tolerance": cert.tolerance,
            },
        },
        "bending_residual": bending_residual,
    }
