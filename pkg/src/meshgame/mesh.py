"""Triangle mesh core: fixed combinatorics, adjacency, and element quality measures.

A mesh is immutable once built. Geometry lives in coordinate arrays that are
passed around as values, so every quality function here is a pure function of
(mesh, coords) and safe to call concurrently.

Planar meshes are stored with z = 0; all formulas are written for 3D
coordinates. Orientation is taken from the vertex order of each element, and
planar elements with negative signed area are reoriented when the mesh is
built.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

SQRT3 = math.sqrt(3.0)

#: Quality value assigned to fully collapsed (zero diameter) triangles.
#: Worst possible payoff, so games never reward collapsing an element.
DEGENERATE_QUALITY = 0.0


class MeshBuildError(ValueError):
    """Raised when vertex/element input cannot form a valid triangle mesh."""


def as_coords3(points) -> np.ndarray:
    """Return coordinates as an (V, 3) float64 array, padding 2D input with z = 0.

    Raises MeshBuildError on non-finite values or unusable shapes.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] not in (2, 3):
        raise MeshBuildError(
            f"coordinates must be an (V, 2) or (V, 3) array, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise MeshBuildError("coordinates contain NaN or Inf")
    if arr.shape[1] == 2:
        arr = np.hstack([arr, np.zeros((arr.shape[0], 1))])
    else:
        arr = arr.copy()
    return arr


@dataclass(frozen=True, eq=False)
class Mesh:
    """A triangle mesh with fixed combinatorics.

    coords: (V, 3) vertex positions.
    elements: (n, 3) vertex index triples; vertex order gives orientation.
    boundary: (V,) flags, True for vertices on a boundary edge.
    vertex_to_elements: for each vertex, the sorted indices of elements
        containing it.
    """

    coords: np.ndarray
    elements: np.ndarray
    boundary: np.ndarray
    vertex_to_elements: tuple[tuple[int, ...], ...]

    @property
    def n_vertices(self) -> int:
        return self.coords.shape[0]

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    def triangle(self, element_index: int, coords=None) -> np.ndarray:
        """The (3, 3) coordinate triple of one element."""
        pts = self.coords if coords is None else as_coords3(coords)
        return pts[self.elements[element_index]]

    def triangles(self, coords=None) -> np.ndarray:
        """All element coordinate triples as an (n, 3, 3) array."""
        pts = self.coords if coords is None else as_coords3(coords)
        return pts[self.elements]

    def __repr__(self) -> str:
        return f"Mesh(n_vertices={self.n_vertices}, n_elements={self.n_elements})"


def build_mesh(vertices, elements, boundary=None) -> Mesh:
    """Build an immutable mesh from vertex coordinates and index triples.

    Boundary vertices are auto-detected as those incident to an edge used by
    exactly one element; pass ``boundary`` to override the detected flags.
    Planar elements listed clockwise are reoriented to positive signed area.
    """
    coords = as_coords3(vertices)
    elems = np.asarray(elements, dtype=np.int64)
    if elems.size == 0 or coords.shape[0] == 0:
        raise MeshBuildError("empty mesh: need at least one vertex and one element")
    if elems.ndim != 2 or elems.shape[1] != 3:
        raise MeshBuildError(
            f"elements must be an (n, 3) array of vertex indices, got shape {elems.shape}"
        )
    n_vertices = coords.shape[0]
    if elems.min() < 0 or elems.max() >= n_vertices:
        raise MeshBuildError(
            f"element vertex index out of range 0..{n_vertices - 1}"
        )
    for i, (a, b, c) in enumerate(elems):
        if a == b or b == c or a == c:
            raise MeshBuildError(f"element {i} repeats a vertex: {(int(a), int(b), int(c))}")

    referenced = np.zeros(n_vertices, dtype=bool)
    referenced[elems.ravel()] = True
    if not referenced.all():
        stray = int(np.nonzero(~referenced)[0][0])
        raise MeshBuildError(f"vertex {stray} is not referenced by any element")

    elems = _reorient_planar(coords, elems)

    vertex_to_elements: list[list[int]] = [[] for _ in range(n_vertices)]
    for i, tri in enumerate(elems):
        for v in tri:
            vertex_to_elements[v].append(i)
    adjacency = tuple(tuple(lst) for lst in vertex_to_elements)

    if boundary is None:
        flags = _detect_boundary(n_vertices, elems)
    else:
        flags = np.asarray(boundary, dtype=bool).copy()
        if flags.shape != (n_vertices,):
            raise MeshBuildError(
                f"boundary flags must have shape ({n_vertices},), got {flags.shape}"
            )

    for arr in (coords, elems, flags):
        arr.setflags(write=False)
    return Mesh(coords=coords, elements=elems, boundary=flags, vertex_to_elements=adjacency)


def _reorient_planar(coords: np.ndarray, elems: np.ndarray) -> np.ndarray:
    """Swap the vertex order of planar elements with negative signed area."""
    tris = coords[elems]
    z = tris[:, :, 2]
    planar = (z[:, 0] == z[:, 1]) & (z[:, 1] == z[:, 2])
    u = tris[:, 1] - tris[:, 0]
    v = tris[:, 2] - tris[:, 0]
    cross_z = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    flip = planar & (cross_z < 0.0)
    if flip.any():
        elems = elems.copy()
        elems[flip] = elems[flip][:, [0, 2, 1]]
    return elems


def _detect_boundary(n_vertices: int, elems: np.ndarray) -> np.ndarray:
    edge_count: dict[tuple[int, int], int] = {}
    for a, b, c in elems:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (int(u), int(v)) if u < v else (int(v), int(u))
            edge_count[key] = edge_count.get(key, 0) + 1
    flags = np.zeros(n_vertices, dtype=bool)
    for (u, v), count in edge_count.items():
        if count == 1:
            flags[u] = True
            flags[v] = True
    return flags


# ---------------------------------------------------------------------------
# Quality measures. Kernels work on (..., 3, 3) stacks of triangles so single
# elements and whole profile batches share the exact same arithmetic.
# ---------------------------------------------------------------------------


def _norm3(v: np.ndarray) -> np.ndarray:
    return np.sqrt(v[..., 0] ** 2 + v[..., 1] ** 2 + v[..., 2] ** 2)


def edge_ratio(tris) -> np.ndarray:
    """Shortest over longest pairwise vertex distance, in [0, 1].

    Equals 1 exactly for equilateral triangles. Collapsed triangles (zero
    diameter) score 0. Collinear but non-coincident triangles can still score
    up to 0.5; the measure is blind to zero area by design.
    """
    tris = np.asarray(tris, dtype=np.float64)
    a, b, c = tris[..., 0, :], tris[..., 1, :], tris[..., 2, :]
    dab = _norm3(b - a)
    dbc = _norm3(c - b)
    dca = _norm3(a - c)
    dmin = np.minimum(np.minimum(dab, dbc), dca)
    dmax = np.maximum(np.maximum(dab, dbc), dca)
    out = np.zeros(dmax.shape)
    np.divide(dmin, dmax, out=out, where=dmax > 0.0)
    return out


def mean_ratio(tris) -> np.ndarray:
    """Area-normalized quality against the equilateral reference, in [0, 1].

    Computes 4*sqrt(3)*area / (sum of squared edge lengths). For triangles in
    a constant-z plane the area is signed with respect to +z and inverted or
    degenerate elements clamp to 0; non-planar triangles use the unsigned
    area (no orientation reference exists off-plane).
    """
    tris = np.asarray(tris, dtype=np.float64)
    a, b, c = tris[..., 0, :], tris[..., 1, :], tris[..., 2, :]
    ab = b - a
    bc = c - b
    ca = a - c
    denom = (
        ab[..., 0] ** 2 + ab[..., 1] ** 2 + ab[..., 2] ** 2
        + bc[..., 0] ** 2 + bc[..., 1] ** 2 + bc[..., 2] ** 2
        + ca[..., 0] ** 2 + ca[..., 1] ** 2 + ca[..., 2] ** 2
    )
    ac = c - a
    cx = ab[..., 1] * ac[..., 2] - ab[..., 2] * ac[..., 1]
    cy = ab[..., 2] * ac[..., 0] - ab[..., 0] * ac[..., 2]
    cz = ab[..., 0] * ac[..., 1] - ab[..., 1] * ac[..., 0]
    planar = (a[..., 2] == b[..., 2]) & (b[..., 2] == c[..., 2])
    doubled_area = np.where(planar, cz, np.sqrt(cx**2 + cy**2 + cz**2))
    out = np.zeros(denom.shape)
    np.divide(2.0 * SQRT3 * doubled_area, denom, out=out, where=denom > 0.0)
    return np.clip(out, 0.0, 1.0)


QUALITY_METRICS = {
    "min_max_edge": edge_ratio,
    "mean_ratio": mean_ratio,
}


def _resolve_metric(metric: str):
    try:
        return QUALITY_METRICS[metric]
    except KeyError:
        known = ", ".join(sorted(QUALITY_METRICS))
        raise ValueError(f"unknown quality metric {metric!r} (known: {known})") from None


def element_quality(mesh: Mesh, element_index: int, coords=None) -> float:
    """Min over max pairwise vertex distance of one element."""
    return float(edge_ratio(mesh.triangle(element_index, coords)))


def mean_ratio_quality(mesh: Mesh, element_index: int, coords=None) -> float:
    """Mean ratio quality of one element against the equilateral reference."""
    return float(mean_ratio(mesh.triangle(element_index, coords)))


def element_qualities(mesh: Mesh, coords=None, metric: str = "min_max_edge") -> np.ndarray:
    """Per-element quality array under the selected metric."""
    kernel = _resolve_metric(metric)
    return kernel(mesh.triangles(coords))


def mesh_quality(
    mesh: Mesh, coords=None, metric: str = "min_max_edge"
) -> tuple[float, float]:
    """Arithmetic mean and minimum of the element qualities."""
    q = element_qualities(mesh, coords, metric)
    return float(q.mean()), float(q.min())
