"""Independent reference implementations used only by tests.

Everything here is written in plain Python over tuples (no numpy, no
imports from the package) so that agreement with the library is evidence,
not circularity. Planar meshes only, boundary always movable.
"""
import itertools
import math

THETA = math.sqrt(3) / 2.0


def oracle_transform(tri, theta=THETA, preserve_area=True):
    """One application of the regularizing transform to a planar triangle."""
    pts = [(float(x), float(y)) for x, y in tri]
    if pts[0] == pts[1] == pts[2]:
        return pts
    out = []
    for i in range(3):
        px, py = pts[(i + 1) % 3]
        qx, qy = pts[(i + 2) % 3]
        mx, my = (px + qx) / 2.0, (py + qy) / 2.0
        ex, ey = qx - px, qy - py
        # +90 degrees about +z: (x, y) -> (-y, x)
        out.append((mx - theta * ey, my + theta * ex))
    if preserve_area:
        a_in, a_out = _area(pts), _area(out)
        if a_in > 0.0 and a_out > 0.0:
            s = math.sqrt(a_in / a_out)
            gx = sum(p[0] for p in out) / 3.0
            gy = sum(p[1] for p in out) / 3.0
            out = [(gx + s * (x - gx), gy + s * (y - gy)) for x, y in out]
    return out


def _area(pts):
    (x0, y0), (x1, y1), (x2, y2) = pts
    return abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)) / 2.0


def oracle_quality(tri):
    """Min/max pairwise vertex distance."""
    d = [math.dist(tri[i], tri[j]) for i in range(3) for j in range(i + 1, 3)]
    dmax = max(d)
    return 0.0 if dmax == 0.0 else min(d) / dmax


def oracle_evaluate(verts, elems, profile, theta=THETA, preserve_area=True):
    """Per-element payoffs of a profile: transform per element, average per
    vertex, score each element in the averaged geometry."""
    proposals = []
    for e, elem in enumerate(elems):
        tri = [verts[v] for v in elem]
        for _ in range(profile[e]):
            tri = oracle_transform(tri, theta, preserve_area)
        proposals.append(tri)
    positions = []
    for v in range(len(verts)):
        incident = [
            (e, list(elems[e]).index(v)) for e in range(len(elems)) if v in elems[e]
        ]
        xs = [proposals[e][slot] for e, slot in incident]
        positions.append(
            (sum(p[0] for p in xs) / len(xs), sum(p[1] for p in xs) / len(xs))
        )
    return [oracle_quality([positions[v] for v in elem]) for elem in elems]


def oracle_equilibria(verts, elems, k, theta=THETA, preserve_area=True, tol=1e-12):
    """All pure equilibria by the double loop: every profile, every
    unilateral deviation. Lexicographic profile order."""
    n = len(elems)
    found = []
    for profile in itertools.product(range(k + 1), repeat=n):
        payoffs = oracle_evaluate(verts, elems, profile, theta, preserve_area)
        improvable = False
        for i in range(n):
            for p in range(k + 1):
                if p == profile[i]:
                    continue
                deviated = list(profile)
                deviated[i] = p
                alt = oracle_evaluate(verts, elems, deviated, theta, preserve_area)
                if alt[i] > payoffs[i] + tol:
                    improvable = True
                    break
            if improvable:
                break
        if not improvable:
            found.append(profile)
    return found


def oracle_best(verts, elems, k, theta=THETA, preserve_area=True):
    """Highest-mean profile, lexicographically first among ties."""
    best_profile, best_mean = None, -1.0
    for profile in itertools.product(range(k + 1), repeat=len(elems)):
        payoffs = oracle_evaluate(verts, elems, profile, theta, preserve_area)
        mean = sum(payoffs) / len(payoffs)
        if mean > best_mean:
            best_profile, best_mean = profile, mean
    return best_profile, best_mean


def mesh_to_oracle(mesh):
    """Strip a planar mesh down to the tuple form the oracle consumes."""
    assert all(z == 0.0 for z in mesh.coords[:, 2])
    verts = [(float(x), float(y)) for x, y, _ in mesh.coords]
    elems = [tuple(int(v) for v in e) for e in mesh.elements]
    return verts, elems
