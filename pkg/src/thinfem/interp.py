"""Nodal interpolation, covering-modified interpolation, quadrature, seminorms.

Quadrature rules live on the reference triangle in barycentric form with
weights summing to 1, so an elementwise integral is |element| * sum(w * f).
Seminorm accumulation runs in ascending element-index order (deterministic).
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import (
    ConflictingCoverValues,
    InvalidCoverGeometry,
    MissingHessian,
    UnsupportedDegree,
)
from .fields import ScalarField
from .geometry import barycentric_coordinates
from .mesh import ConformalMesh

DEFAULT_DEGREE = 6
_CHUNK = 16384


@dataclass(frozen=True)
class QuadratureRule:
    """Symmetric rule on the reference triangle: barycentric points + weights."""

    points: np.ndarray  # (q, 3) barycentric coordinates
    weights: np.ndarray  # (q,), sums to 1
    degree: int


_SQRT15 = math.sqrt(15.0)


def _orbit(lam):
    """All distinct permutations of a barycentric triple."""
    seen = []
    for p in {
        (lam[0], lam[1], lam[2]),
        (lam[0], lam[2], lam[1]),
        (lam[1], lam[0], lam[2]),
        (lam[1], lam[2], lam[0]),
        (lam[2], lam[0], lam[1]),
        (lam[2], lam[1], lam[0]),
    }:
        seen.append(p)
    return sorted(seen)


def _low_degree_rule(degree):
    if degree == 1:
        return [(1 / 3, 1 / 3, 1 / 3)], [1.0]
    if degree == 2:
        pts = _orbit((0.5, 0.5, 0.0))
        return pts, [1.0 / 3.0] * 3
    if degree == 3:
        pts = [(1 / 3, 1 / 3, 1 / 3)] + _orbit((3 / 5, 1 / 5, 1 / 5))
        return pts, [-9 / 16] + [25 / 48] * 3
    # the classical 7-point degree-5 rule (also serves degree 4)
    a = (6 + _SQRT15) / 21
    b = (6 - _SQRT15) / 21
    pts = (
        [(1 / 3, 1 / 3, 1 / 3)]
        + _orbit((1 - 2 * a, a, a))
        + _orbit((1 - 2 * b, b, b))
    )
    w = [9 / 40] + [(155 + _SQRT15) / 1200] * 3 + [(155 - _SQRT15) / 1200] * 3
    return pts, w


def _gauss01(n):
    t, w = leggauss(n)
    return (t + 1.0) / 2.0, w / 2.0


def _collapsed_rule(degree):
    """Gauss-Legendre product rule on the collapsed square, symmetrized.

    The map (u, v) -> (x, y) = (u, v(1-u)) carries the unit square onto the
    reference triangle with Jacobian (1-u); symmetrizing over the six
    barycentric permutations keeps exactness and restores full symmetry.
    """
    nu = (degree + 3) // 2  # integrand u-degree is degree+1
    nv = (degree + 2) // 2
    u, wu = _gauss01(nu)
    v, wv = _gauss01(nv)
    pts, w = [], []
    for i in range(nu):
        for j in range(nv):
            x = u[i]
            y = v[j] * (1.0 - u[i])
            base_w = 2.0 * wu[i] * wv[j] * (1.0 - u[i])
            lam = (1.0 - x - y, x, y)
            for p in (
                (lam[0], lam[1], lam[2]),
                (lam[0], lam[2], lam[1]),
                (lam[1], lam[0], lam[2]),
                (lam[1], lam[2], lam[0]),
                (lam[2], lam[0], lam[1]),
                (lam[2], lam[1], lam[0]),
            ):
                pts.append(p)
                w.append(base_w / 6.0)
    return pts, w


def quadrature_rule(degree: int) -> QuadratureRule:
    """Symmetric reference-triangle rule exact for total degree `degree`."""
    if not isinstance(degree, int) or not 1 <= degree <= 10:
        raise UnsupportedDegree(f"degree must be an integer in 1..10, got {degree}")
    if degree <= 5:
        pts, w = _low_degree_rule(degree)
    else:
        pts, w = _collapsed_rule(degree)
    points = np.asarray(pts, dtype=np.float64)
    weights = np.asarray(w, dtype=np.float64)
    return QuadratureRule(points=points, weights=weights, degree=degree)


# ---------------------------------------------------------------------------
# nodal functions and interpolation


@dataclass
class NodalFunction:
    """One value per mesh vertex; the piecewise-linear function it induces."""

    mesh: ConformalMesh
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.mesh.n_vertices,):
            raise ValueError("nodal value count must equal the vertex count")


def lagrange_interpolate(u: ScalarField, m: ConformalMesh) -> NodalFunction:
    """Plain nodal interpolant: value at every vertex is u(vertex)."""
    return NodalFunction(m, u.value(m.points))


def cover_interpolate(
    u: ScalarField, m: ConformalMesh, plan, force: bool = False
) -> NodalFunction:
    """Covering-modified nodal interpolant.

    Vertices of clustered elements take the value of the linear interpolant
    of u over their covering simplex (barycentric evaluation); all other
    vertices take u(vertex). Unless force=True the plan is re-verified
    first, against the unit-square domain; callers on other domains should
    verify themselves (verify_cover_plan with their boundary polygon) and
    pass force=True.

    Raises ConflictingCoverValues when two covers disagree at a vertex
    beyond 1e-12 * (1 + max|u|), and InvalidCoverGeometry when a clustered
    vertex falls outside its cover by more than 1e-10 in barycentric terms.
    """
    if not force:
        from .covering import verify_cover_plan

        report = verify_cover_plan(m, plan)
        if not report.satisfied:
            from .errors import InvalidPlan

            raise InvalidPlan(
                "cover plan failed verification; pass force=True to override"
            )
    values = np.asarray(u.value(m.points), dtype=np.float64)
    uinf = float(np.max(np.abs(values))) if len(values) else 0.0
    tol = 1e-12 * (1.0 + uinf)

    assigned = {}  # vertex -> (cover index, value)
    for k, cover in enumerate(plan.covers):
        tri = cover.simplex.vertices
        corner_vals = np.asarray(u.value(tri), dtype=np.float64)
        vertex_ids = np.unique(m.elements[list(cover.elements)])
        lam = barycentric_coordinates(tri, m.points[vertex_ids])
        if np.any(lam < -1e-10):
            worst = int(vertex_ids[np.argmin(lam.min(axis=1))])
            raise InvalidCoverGeometry(
                f"vertex {worst} outside cover {k} (barycentric {lam.min():.3e})"
            )
        vals = lam @ corner_vals
        for vid, val in zip(vertex_ids.tolist(), vals.tolist()):
            if vid in assigned:
                k0, v0 = assigned[vid]
                if abs(val - v0) > tol:
                    raise ConflictingCoverValues(
                        f"vertex {vid}: covers {k0} and {k} give "
                        f"{v0!r} vs {val!r}"
                    )
            else:
                assigned[vid] = (k, val)
    for vid, (_, val) in assigned.items():
        values[vid] = val
    return NodalFunction(m, values)


# ---------------------------------------------------------------------------
# seminorms


def _element_geometry(m):
    ep = m.element_points()
    e0 = ep[:, 2] - ep[:, 1]
    e1 = ep[:, 0] - ep[:, 2]
    e2 = ep[:, 1] - ep[:, 0]
    two_a = e2[:, 0] * (-e1[:, 1]) - e2[:, 1] * (-e1[:, 0])  # 2 * signed area
    return ep, (e0, e1, e2), two_a


def element_gradients(m: ConformalMesh, v: NodalFunction) -> np.ndarray:
    """Constant gradient of the piecewise-linear function on each element."""
    ep, (e0, e1, e2), two_a = _element_geometry(m)
    vals = v.values[m.elements]
    gx = (
        vals[:, 0] * (-e0[:, 1]) + vals[:, 1] * (-e1[:, 1]) + vals[:, 2] * (-e2[:, 1])
    ) / two_a
    gy = (
        vals[:, 0] * e0[:, 0] + vals[:, 1] * e1[:, 0] + vals[:, 2] * e2[:, 0]
    ) / two_a
    return np.stack([gx, gy], axis=1)


def h1_seminorm_diff(
    m: ConformalMesh, u: ScalarField, v: NodalFunction, rule: QuadratureRule
) -> float:
    """|u - v|_{H1}: sqrt of the elementwise integral of |grad u - grad v|^2."""
    if u.gradient is None:
        raise ValueError("field supplies no gradient")
    ep = m.element_points()
    areas = np.abs(0.5 * _element_geometry(m)[2])
    grads = element_gradients(m, v)
    lam = rule.points
    w = rule.weights
    per_elem = np.empty(m.n_elements)
    for lo in range(0, m.n_elements, _CHUNK):
        hi = min(lo + _CHUNK, m.n_elements)
        phys = np.einsum("qb,ebd->eqd", lam, ep[lo:hi])
        du = u.gradient(phys) - grads[lo:hi, None, :]
        per_elem[lo:hi] = (du[..., 0] ** 2 + du[..., 1] ** 2) @ w
    return float(np.sqrt(np.sum(per_elem * areas)))


def h2_seminorm(u: ScalarField, m: ConformalMesh, rule: QuadratureRule) -> float:
    """|u|_{H2}: sqrt of the integral of u_xx^2 + 2 u_xy^2 + u_yy^2."""
    if u.hessian is None:
        raise MissingHessian(f"field {u.name!r} supplies no Hessian")
    ep = m.element_points()
    areas = np.abs(0.5 * _element_geometry(m)[2])
    lam = rule.points
    w = rule.weights
    per_elem = np.empty(m.n_elements)
    for lo in range(0, m.n_elements, _CHUNK):
        hi = min(lo + _CHUNK, m.n_elements)
        phys = np.einsum("qb,ebd->eqd", lam, ep[lo:hi])
        h = u.hessian(phys)
        integrand = h[..., 0, 0] ** 2 + 2.0 * h[..., 0, 1] ** 2 + h[..., 1, 1] ** 2
        per_elem[lo:hi] = integrand @ w
    return float(np.sqrt(np.sum(per_elem * areas)))
