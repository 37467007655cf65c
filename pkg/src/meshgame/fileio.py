"""Triangle mesh file I/O: OFF and OBJ readers, OFF writer.

Only triangle faces are accepted. Parse failures raise MeshParseError with
the offending line number. The writer formats coordinates with %.17g so a
write/read cycle reproduces float64 values exactly.
"""
from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .mesh import Mesh, build_mesh


class MeshParseError(ValueError):
    def __init__(self, path, line_no: int, message: str):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


def _significant_lines(text: str):
    """Yield (line_no, stripped) for lines that carry data, 1-based."""
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line


def _parse_floats(path, line_no: int, tokens, count: int, what: str):
    if len(tokens) < count:
        raise MeshParseError(path, line_no, f"expected {count} coordinates for {what}")
    try:
        return [float(t) for t in tokens[:count]]
    except ValueError:
        raise MeshParseError(path, line_no, f"bad coordinate in {what}: {tokens!r}") from None


def read_off(path) -> Mesh:
    """Read an OFF file containing a triangle mesh.

    Accepts the usual layout: an OFF keyword line, a counts line
    (vertices faces edges), vertex lines, then face lines. Comments and
    blank lines are skipped. Faces with more than 3 vertices are rejected.
    """
    text = Path(path).read_text()
    lines = list(_significant_lines(text))
    if not lines:
        raise MeshParseError(path, 1, "empty file")

    pos = 0
    line_no, line = lines[pos]
    tokens = line.split()
    if tokens[0].upper() == "OFF":
        tokens = tokens[1:]
        if not tokens:
            pos += 1
            if pos >= len(lines):
                raise MeshParseError(path, line_no, "missing counts line after OFF")
            line_no, line = lines[pos]
            tokens = line.split()
    if len(tokens) < 2:
        raise MeshParseError(path, line_no, f"expected 'nv nf [ne]' counts, got {line!r}")
    try:
        n_vertices, n_faces = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise MeshParseError(path, line_no, f"bad counts line {line!r}") from None
    pos += 1

    if len(lines) - pos < n_vertices + n_faces:
        raise MeshParseError(
            path,
            lines[-1][0],
            f"file ends early: need {n_vertices} vertices + {n_faces} faces",
        )

    vertices = np.empty((n_vertices, 3))
    for i in range(n_vertices):
        line_no, line = lines[pos + i]
        vertices[i] = _parse_floats(path, line_no, line.split(), 3, f"vertex {i}")
    pos += n_vertices

    faces = np.empty((n_faces, 3), dtype=np.int64)
    for i in range(n_faces):
        line_no, line = lines[pos + i]
        tokens = line.split()
        try:
            arity = int(tokens[0])
        except (IndexError, ValueError):
            raise MeshParseError(path, line_no, f"bad face line {line!r}") from None
        if arity != 3:
            raise MeshParseError(
                path, line_no, f"only triangle faces supported, face {i} has {arity} vertices"
            )
        if len(tokens) < 4:
            raise MeshParseError(path, line_no, f"face {i} lists fewer vertices than declared")
        try:
            faces[i] = [int(t) for t in tokens[1:4]]
        except ValueError:
            raise MeshParseError(path, line_no, f"bad vertex index in face {i}") from None

    return build_mesh(vertices, faces)


def _parse_obj_index(path, line_no: int, token: str, n_vertices: int) -> int:
    # OBJ face tokens may carry texture/normal refs: v, v/vt, v//vn, v/vt/vn.
    head = token.split("/", 1)[0]
    try:
        idx = int(head)
    except ValueError:
        raise MeshParseError(path, line_no, f"bad face index {token!r}") from None
    if idx > 0:
        idx -= 1
    elif idx < 0:
        idx += n_vertices
    else:
        raise MeshParseError(path, line_no, "OBJ indices are 1-based, got 0")
    return idx


def read_obj(path) -> Mesh:
    """Read a Wavefront OBJ triangle mesh (v and f statements only)."""
    text = Path(path).read_text()
    vertices: list[list[float]] = []
    raw_faces: list[tuple[int, list[str]]] = []
    for line_no, line in _significant_lines(text):
        tokens = line.split()
        kind = tokens[0]
        if kind == "v":
            vertices.append(_parse_floats(path, line_no, tokens[1:], 3, "vertex"))
        elif kind == "f":
            if len(tokens) - 1 != 3:
                raise MeshParseError(
                    path,
                    line_no,
                    f"only triangle faces supported, got {len(tokens) - 1} vertices",
                )
            raw_faces.append((line_no, tokens[1:]))
        # Other statements (vn, vt, o, g, s, usemtl, ...) are ignored.
    if not vertices:
        raise MeshParseError(path, 1, "no vertices found")
    if not raw_faces:
        raise MeshParseError(path, 1, "no faces found")
    faces = np.array(
        [
            [_parse_obj_index(path, line_no, t, len(vertices)) for t in tokens]
            for line_no, tokens in raw_faces
        ],
        dtype=np.int64,
    )
    return build_mesh(np.asarray(vertices), faces)


def read_mesh(path) -> Mesh:
    """Dispatch on file extension: .off or .obj."""
    suffix = Path(path).suffix.lower()
    if suffix == ".off":
        return read_off(path)
    if suffix == ".obj":
        return read_obj(path)
    raise ValueError(f"unsupported mesh format {suffix!r} (want .off or .obj)")


def write_off(path, mesh: Mesh, coords=None) -> None:
    """Write the mesh as OFF, optionally with replacement coordinates."""
    pts = mesh.coords if coords is None else np.asarray(coords, dtype=float)
    if pts.shape != (mesh.n_vertices, 3):
        raise ValueError(f"coords shape {pts.shape} does not match mesh")
    lines = ["OFF", f"{mesh.n_vertices} {mesh.n_elements} 0"]
    for p in pts:
        lines.append(f"{p[0]:.17g} {p[1]:.17g} {p[2]:.17g}")
    for e in mesh.elements:
        lines.append(f"3 {e[0]} {e[1]} {e[2]}")
    Path(path).write_text("\n".join(lines) + "\n")
