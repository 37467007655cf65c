"""Regularizing triangle transformation and its powers.

Each vertex is rebuilt from the opposite edge: take the edge midpoint and
erect a perpendicular of length theta times the edge length, rotating the
edge vector by +90 degrees in the triangle's oriented plane. With
theta = sqrt(3)/2 the equilateral triangle is an exact fixpoint, and the
construction preserves the centroid exactly because the rotated edge vectors
sum to zero. Optionally the result is rescaled about its centroid so the
unsigned area matches the input, which keeps iterated smoothing from
shrinking or growing elements.

Elements lying in a constant-z plane are rotated about the global +z axis,
so clockwise (inverted) planar elements are pushed back toward positive
orientation instead of being regularized mirror-wise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .mesh import as_coords3

#: Height coefficient that makes the equilateral triangle an exact fixpoint.
EQUILATERAL_THETA = math.sqrt(3.0) / 2.0

_Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class TransformParams:
    """Parameters of the regularizing transformation.

    theta: perpendicular height per unit edge length, > 0.
    preserve_area: rescale the result about its centroid to the input's
        unsigned area.
    """

    theta: float = EQUILATERAL_THETA
    preserve_area: bool = True

    def __post_init__(self):
        if not math.isfinite(self.theta) or self.theta <= 0.0:
            raise ValueError(f"theta must be finite and positive, got {self.theta}")


def _as_triangle(triangle) -> np.ndarray:
    tri = np.asarray(triangle, dtype=np.float64)
    if tri.shape not in ((3, 2), (3, 3)):
        raise ValueError(f"triangle must have shape (3, 2) or (3, 3), got {tri.shape}")
    return as_coords3(tri)


def unsigned_area(triangle) -> float:
    """Unsigned area of a triangle given as three coordinate rows."""
    tri = _as_triangle(triangle)
    cross = np.cross(tri[1] - tri[0], tri[2] - tri[0])
    return 0.5 * float(np.sqrt(cross[0] ** 2 + cross[1] ** 2 + cross[2] ** 2))


def _plane_axis(tri: np.ndarray) -> np.ndarray:
    """Unit rotation axis for the +90 degree in-plane rotation."""
    if tri[0, 2] == tri[1, 2] == tri[2, 2]:
        return _Z_AXIS
    n = np.cross(tri[1] - tri[0], tri[2] - tri[0])
    norm = np.sqrt(n[0] ** 2 + n[1] ** 2 + n[2] ** 2)
    if norm == 0.0:
        # Collinear in 3D; no plane of its own. Fall back to the global axis.
        return _Z_AXIS
    return n / norm


def transform_element(triangle, params: TransformParams | None = None) -> np.ndarray:
    """Apply the regularizing transformation once.

    Returns a new (3, 3) array; the input is never modified. A fully
    collapsed triangle (all vertices coincident) is returned unchanged since
    there is nothing to regularize.
    """
    params = params or TransformParams()
    tri = _as_triangle(triangle)
    if (tri[0] == tri[1]).all() and (tri[1] == tri[2]).all():
        return tri.copy()

    axis = _plane_axis(tri)
    out = np.empty_like(tri)
    for i in range(3):
        a = tri[(i + 1) % 3]
        b = tri[(i + 2) % 3]
        edge = b - a
        midpoint = (a + b) / 2.0
        out[i] = midpoint + params.theta * np.cross(axis, edge)

    if params.preserve_area:
        area_in = unsigned_area(tri)
        area_out = unsigned_area(out)
        if area_in > 0.0 and area_out > 0.0:
            scale = math.sqrt(area_in / area_out)
            centroid = out.mean(axis=0)
            out = centroid + scale * (out - centroid)
    return out


def transform_power(triangle, j: int, params: TransformParams | None = None) -> np.ndarray:
    """The j-fold composition of the transformation; j = 0 is the identity."""
    if j < 0:
        raise ValueError(f"power must be non-negative, got {j}")
    tri = _as_triangle(triangle)
    for _ in range(j):
        tri = transform_element(tri, params)
    return tri
