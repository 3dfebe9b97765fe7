"""Metrics on individual simplices: angles, diameters, inradii, measures.

All angle computations go through two-argument arctangents of (cross, dot)
pairs rather than arccos of normalized dots, which keeps full accuracy for
angles near 0 and near pi - exactly where degenerate elements live.
"""

import itertools
import math

import numpy as np

from . import _kernels
from .errors import DegenerateSimplex

# A simplex only counts as degenerate when its measure would be useless for
# division; arbitrarily thin but nondegenerate elements are first-class here.
MEASURE_FLOOR = 1e-300


class Simplex:
    """An n-simplex (triangle or tetrahedron) given by its n+1 vertices.

    Vertices are stored as an (n+1, n) float array. Construction validates
    shape and finiteness only; degeneracy is checked by the metric
    operations that need to divide by the measure.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] not in (2, 3) or v.shape[0] != v.shape[1] + 1:
            raise ValueError(
                f"expected (n+1, n) vertex array with n in {{2, 3}}, got {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("simplex vertices must be finite")
        self.vertices = v

    @property
    def dim(self):
        return self.vertices.shape[1]

    def __repr__(self):
        return f"Simplex({self.vertices.tolist()})"


def measure(s: Simplex) -> float:
    """Area (2D) or volume (3D): |det| of the edge matrix over n!.

    Returns 0.0 for degenerate input; callers decide how to react.
    """
    v = s.vertices
    edges = v[1:] - v[0]
    det = np.linalg.det(edges)
    return abs(det) / math.factorial(s.dim)


def diameter(s: Simplex) -> float:
    """Maximum pairwise vertex distance."""
    v = s.vertices
    best = 0.0
    for i, j in itertools.combinations(range(len(v)), 2):
        best = max(best, float(np.linalg.norm(v[i] - v[j])))
    return best


def _triangle_area(pts):
    u = pts[1] - pts[0]
    w = pts[2] - pts[0]
    if pts.shape[1] == 2:
        return abs(u[0] * w[1] - u[1] * w[0]) / 2.0
    return float(np.linalg.norm(np.cross(u, w))) / 2.0


def inradius_diameter(s: Simplex) -> float:
    """Diameter of the inscribed ball: 2 n |s| / (sum of facet measures)."""
    if measure(s) < MEASURE_FLOOR:
        raise DegenerateSimplex(f"measure below {MEASURE_FLOOR}")
    v = s.vertices
    n = s.dim
    if n == 2:
        perimeter = sum(
            float(np.linalg.norm(v[i] - v[j]))
            for i, j in itertools.combinations(range(3), 2)
        )
        return 4.0 * measure(s) / perimeter
    faces = sum(
        _triangle_area(v[list(f)]) for f in itertools.combinations(range(4), 3)
    )
    return 6.0 * measure(s) / faces


def shape_ratio(s: Simplex) -> float:
    """Diameter over inscribed-ball diameter; >= sqrt(3) in 2D."""
    return diameter(s) / inradius_diameter(s)


def triangle_corner_angles(tri) -> np.ndarray:
    """Per-corner inner angles for a batch of triangles, shape (m, 3) -> (m, 3)."""
    tri = np.asarray(tri, dtype=np.float64)
    return _kernels.tri_corner_angles(tri.reshape(-1, 3, 2))


def triangle_angles(s: Simplex):
    """(theta_min, theta_max) of a triangle.

    Raises DegenerateSimplex when the area sits below the floor.
    """
    if s.dim != 2:
        raise ValueError("triangle_angles expects a 2-simplex")
    if measure(s) < MEASURE_FLOOR:
        raise DegenerateSimplex(f"measure below {MEASURE_FLOOR}")
    ang = triangle_corner_angles(s.vertices[None, :, :])[0]
    return float(ang.min()), float(ang.max())


def _angle_between(u, v):
    """Angle in [0, pi] between 3D vectors, via atan2(|u x v|, u.v)."""
    cross = np.cross(u, v)
    return math.atan2(float(np.linalg.norm(cross)), float(np.dot(u, v)))


def solid_angle(apex, others):
    """Solid angle at `apex` subtended by three points, in steradians.

    Uses the arctangent form tan(omega/2) = |det| / (scalar combination),
    which stays stable for nearly flat vertex configurations.
    """
    a, b, c = (np.asarray(p, dtype=np.float64) - np.asarray(apex) for p in others)
    la, lb, lc = (float(np.linalg.norm(x)) for x in (a, b, c))
    det = float(np.linalg.det(np.stack([a, b, c])))
    denom = (
        la * lb * lc
        + float(np.dot(a, b)) * lc
        + float(np.dot(a, c)) * lb
        + float(np.dot(b, c)) * la
    )
    return 2.0 * math.atan2(abs(det), denom)


def tetrahedron_face_angles(s: Simplex):
    """The 12 face angles (3 per triangular face)."""
    v = s.vertices
    out = []
    for face in itertools.combinations(range(4), 3):
        for i in range(3):
            p = v[face[i]]
            u = v[face[(i + 1) % 3]] - p
            w = v[face[(i + 2) % 3]] - p
            out.append(_angle_between(u, w))
    return out


def tetrahedron_dihedral_angles(s: Simplex):
    """The 6 dihedral angles, one per edge, via projections orthogonal to the edge."""
    v = s.vertices
    out = []
    for i, j in itertools.combinations(range(4), 2):
        k, l = (m for m in range(4) if m not in (i, j))
        e = v[j] - v[i]
        e = e / np.linalg.norm(e)
        u = v[k] - v[i]
        w = v[l] - v[i]
        u = u - np.dot(u, e) * e
        w = w - np.dot(w, e) * e
        out.append(_angle_between(u, w))
    return out


def tetrahedron_solid_angles(s: Simplex):
    """The 4 vertex solid angles."""
    v = s.vertices
    return [
        solid_angle(v[i], [v[j] for j in range(4) if j != i]) for i in range(4)
    ]


def tetrahedron_angles(s: Simplex):
    """(theta_min, theta_max) of a tetrahedron.

    theta_min ranges over the 12 face angles and 4 vertex solid angles;
    theta_max over the 12 face angles and 6 dihedral angles.
    """
    if s.dim != 3:
        raise ValueError("tetrahedron_angles expects a 3-simplex")
    if measure(s) < MEASURE_FLOOR:
        raise DegenerateSimplex(f"measure below {MEASURE_FLOOR}")
    faces = tetrahedron_face_angles(s)
    theta_min = min(min(faces), min(tetrahedron_solid_angles(s)))
    theta_max = max(max(faces), max(tetrahedron_dihedral_angles(s)))
    return theta_min, theta_max


def simplex_angles(s: Simplex):
    """Dimension-dispatching (theta_min, theta_max)."""
    return triangle_angles(s) if s.dim == 2 else tetrahedron_angles(s)


# ---------------------------------------------------------------------------
# batch helpers used by the mesh-level modules


def triangle_signed_areas(tri) -> np.ndarray:
    """Signed areas of a (m, 3, 2) batch; positive for counterclockwise order."""
    tri = np.asarray(tri, dtype=np.float64)
    u = tri[:, 1] - tri[:, 0]
    w = tri[:, 2] - tri[:, 0]
    return 0.5 * (u[:, 0] * w[:, 1] - u[:, 1] * w[:, 0])


def triangle_diameters(tri) -> np.ndarray:
    """Longest-edge length of each triangle in a (m, 3, 2) batch."""
    tri = np.asarray(tri, dtype=np.float64)
    d = np.empty((tri.shape[0], 3))
    for i in range(3):
        e = tri[:, (i + 1) % 3] - tri[:, i]
        d[:, i] = np.hypot(e[:, 0], e[:, 1])
    return d.max(axis=1)


def barycentric_coordinates(tri, pts) -> np.ndarray:
    """Barycentric coordinates of points with respect to one triangle.

    Parameters
    ----------
    tri : (3, 2) triangle vertices.
    pts : (m, 2) query points.

    Returns
    -------
    (m, 3) coordinates summing to 1 per row (signed area ratios).
    """
    tri = np.asarray(tri, dtype=np.float64)
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    t = tri[1:] - tri[0]
    det = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    if abs(det) < MEASURE_FLOOR:
        raise DegenerateSimplex("barycentric coordinates of a degenerate triangle")
    r = pts - tri[0]
    lam1 = (r[:, 0] * t[1, 1] - r[:, 1] * t[1, 0]) / det
    lam2 = (t[0, 0] * r[:, 1] - t[0, 1] * r[:, 0]) / det
    return np.column_stack([1.0 - lam1 - lam2, lam1, lam2])


def barycentric_batch(tris, pts) -> np.ndarray:
    """Barycentric coordinates for paired batches.

    Parameters
    ----------
    tris : (p, 3, 2) triangles.
    pts : (p, m, 2) query points, m per triangle.

    Returns
    -------
    (p, m, 3) coordinates.
    """
    tris = np.asarray(tris, dtype=np.float64)
    pts = np.asarray(pts, dtype=np.float64)
    t1 = tris[:, 1] - tris[:, 0]
    t2 = tris[:, 2] - tris[:, 0]
    det = t1[:, 0] * t2[:, 1] - t1[:, 1] * t2[:, 0]
    if np.any(np.abs(det) < MEASURE_FLOOR):
        raise DegenerateSimplex("barycentric coordinates of a degenerate triangle")
    r = pts - tris[:, None, 0]
    lam1 = (r[..., 0] * t2[:, None, 1] - r[..., 1] * t2[:, None, 0]) / det[:, None]
    lam2 = (t1[:, None, 0] * r[..., 1] - t1[:, None, 1] * r[..., 0]) / det[:, None]
    return np.stack([1.0 - lam1 - lam2, lam1, lam2], axis=-1)
