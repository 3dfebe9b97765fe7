"""Shared mesh/plan constructions used by several test modules."""

import numpy as np

from thinfem import covering, geometry, mesh, quality


def parent_cover_plan(K, eps=0.05, theta=0.5, psi=0.7):
    """Cover plan for generate_refined_diag(K): parents cover their thin child.

    Each thin child (the pair straddling the square diagonals) is clustered
    under the uniform-right parent triangle that contains it.
    """
    child = mesh.generate_refined_diag(K, eps)
    parents = mesh.generate_uniform_right(K).element_points()
    cls = quality.classify(child, theta)
    covers = []
    for e in cls.bad_elements:
        pts = child.element_points()[e]
        parent = None
        for ptri in parents:
            lam = geometry.barycentric_coordinates(ptri, pts)
            if np.all(lam >= -1e-12):
                parent = ptri
                break
        assert parent is not None
        covers.append(covering.VirtualCover(geometry.Simplex(parent), (int(e),)))
    params = covering.PlanParams(theta=theta, psi=psi, C=1.0, M=1, N=1)
    return child, covering.CoverPlan(covers, params)


def strip_mesh():
    """Five-element mesh on the triangle (0,0)-(1,0)-(0.5,0.8).

    Contains a flat bottom element plus a sliver band above it; used to
    build a pure multiplicity violation (two covers with coinciding
    interiors, each owning one element of the band).
    """
    pts = [(0, 0), (1, 0), (0.5, 0.01), (0.5, 0.02), (0.5, 0.8)]
    elements = [
        (0, 1, 2),  # flat ABE1
        (0, 2, 3),  # sliver A-E1-E2
        (2, 1, 3),  # sliver E1-B-E2
        (0, 3, 4),  # cap left
        (3, 1, 4),  # cap right
    ]
    m = mesh.ConformalMesh(pts, elements, [0, 1, 4])
    polygon = [(0, 0), (1, 0), (0.5, 0.8)]
    return m, polygon


def split_edge_mesh():
    """Unit-square mesh with two thin slivers meeting at (0.5, 0.5).

    The slivers sit on opposite sides of the segment x = 0.5 and share only
    that midpoint vertex; fans of well-shaped triangles fill the rest. Used
    for the cross-cover hull condition: covers sharing the full segment
    pass, covers sharing only the top point fail.
    """
    pts = [
        (0.5, 0.0),  # 0  v0
        (0.5, 0.3),  # 1  v1
        (0.5, 0.5),  # 2  v2 (the shared vertex)
        (0.5, 0.7),  # 3  v3
        (0.5, 1.0),  # 4  v5
        (0.49, 0.4),  # 5  a (left sliver apex)
        (0.51, 0.6),  # 6  b (right sliver apex)
        (0.0, 0.0),  # 7  c0
        (1.0, 0.0),  # 8  c1
        (1.0, 1.0),  # 9  c2
        (0.0, 1.0),  # 10 c3
        (0.25, 0.45),  # 11 m_l
        (0.75, 0.55),  # 12 m_r
    ]
    elements = [
        (2, 1, 5),  # tau1: left sliver (v2, v1, a)
        (2, 6, 3),  # tau2: right sliver (v2, b, v3) oriented ccw
        # left fan around m_l
        (11, 7, 0),
        (11, 0, 1),
        (11, 1, 5),
        (11, 5, 2),
        (11, 2, 3),
        (11, 3, 4),
        (11, 4, 10),
        (11, 10, 7),
        # right fan around m_r
        (12, 0, 8),
        (12, 8, 9),
        (12, 9, 4),
        (12, 4, 3),
        (12, 3, 6),
        (12, 6, 2),
        (12, 2, 1),
        (12, 1, 0),
    ]
    m = mesh.ConformalMesh(pts, elements, [0, 4, 7, 8, 9, 10])
    return m


def split_edge_plans():
    """(mesh, passing plan, (4)-violating plan) for split_edge_mesh."""
    m = split_edge_mesh()
    t_left = geometry.Simplex([(0.5, 0.8), (0.5, 0.0), (0.1, 0.4)])
    t_right_pass = geometry.Simplex([(0.5, 0.8), (0.5, 0.0), (0.9, 0.5)])
    t_right_fail = geometry.Simplex([(0.5, 0.8), (0.5, 0.2), (0.9, 0.5)])
    params = covering.PlanParams(theta=0.3, psi=0.6, C=1.0, M=1, N=1)
    good = covering.CoverPlan(
        [covering.VirtualCover(t_left, (0,)), covering.VirtualCover(t_right_pass, (1,))],
        params,
    )
    bad = covering.CoverPlan(
        [covering.VirtualCover(t_left, (0,)), covering.VirtualCover(t_right_fail, (1,))],
        params,
    )
    return m, good, bad


def l_mesh():
    """L-shaped domain with a flat element pinned at the reentrant corner.

    Returns (mesh, polygon, flat element id). The boundary-hull condition
    can only fail at a reentrant corner, so this is the (5)-violation rig.
    """
    pts = [
        (0.0, 0.0),  # 0 c0
        (2.0, 0.0),  # 1 c1
        (2.0, 1.0),  # 2 c2
        (1.0, 1.0),  # 3 r (reentrant corner)
        (1.0, 2.0),  # 4 c3
        (0.0, 2.0),  # 5 c4
        (0.65, 0.65),  # 6 p
        (0.84, 0.86),  # 7 q
        (0.45, 1.1),  # 8 s
    ]
    elements = [
        (3, 7, 6),  # tau: flat element (r, q, p)
        (0, 1, 6),
        (1, 3, 6),
        (1, 2, 3),
        (0, 6, 8),
        (6, 7, 8),
        (7, 3, 8),
        (3, 4, 8),
        (4, 5, 8),
        (5, 0, 8),
    ]
    m = mesh.ConformalMesh(pts, elements, [0, 1, 2, 3, 4, 5])
    polygon = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
    return m, polygon, 0


def l_mesh_plans():
    """(passing plan, (5)-violating plan) for l_mesh.

    The passing cover has a vertex at the reentrant corner; the failing
    variant covers the same element with an interior-vertex triangle whose
    boundary hull is therefore empty.
    """
    t_pass = geometry.Simplex([(1.0, 1.0), (0.45, 0.8), (0.8, 0.45)])
    t_fail = geometry.Simplex([(1.15, 0.85), (0.85, 1.15), (0.55, 0.55)])
    params = covering.PlanParams(theta=0.3, psi=0.6, C=1.0, M=1, N=1)
    good = covering.CoverPlan([covering.VirtualCover(t_pass, (0,))], params)
    bad = covering.CoverPlan([covering.VirtualCover(t_fail, (0,))], params)
    return good, bad
