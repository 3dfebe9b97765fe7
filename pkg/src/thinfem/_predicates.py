"""Tolerance-aware 2D predicates shared by the mesh and covering modules.

Everything here works on plain float coordinates; tolerances are passed in
by callers, scaled to their mesh size. No exact arithmetic (out of scope):
the inputs are generated or file-read coordinates, not adversarial ones.
"""

import numpy as np

from .geometry import barycentric_coordinates


def triangle_bboxes(tri):
    """(m, 4) array of (minx, miny, maxx, maxy) per triangle."""
    tri = np.asarray(tri, dtype=np.float64)
    return np.concatenate([tri.min(axis=1), tri.max(axis=1)], axis=1)


def bboxes_overlap(boxes_a, boxes_b, margin=0.0):
    """Elementwise bbox-overlap mask for paired (p, 4) arrays."""
    return ~(
        (boxes_a[:, 2] + margin < boxes_b[:, 0])
        | (boxes_b[:, 2] + margin < boxes_a[:, 0])
        | (boxes_a[:, 3] + margin < boxes_b[:, 1])
        | (boxes_b[:, 3] + margin < boxes_a[:, 1])
    )


def positive_area_overlap(tri_a, tri_b, rel_tol=1e-12):
    """Whether each triangle pair intersects with positive area.

    Separating-axis test over the six edge normals (exact for convex sets up
    to the tolerance): pairs that merely touch at a point or along an edge
    report False.

    Parameters
    ----------
    tri_a, tri_b : (p, 3, 2) paired triangle batches.
    """
    a = np.asarray(tri_a, dtype=np.float64)
    b = np.asarray(tri_b, dtype=np.float64)
    if a.ndim == 2:
        a = a[None]
        b = b[None]
    p = a.shape[0]
    scale = np.maximum(
        np.abs(a).max(axis=(1, 2)), np.abs(b).max(axis=(1, 2))
    ) + 1.0
    result = np.ones(p, dtype=bool)
    for src in (a, b):
        for i in range(3):
            e = src[:, (i + 1) % 3] - src[:, i]
            n = np.stack([-e[:, 1], e[:, 0]], axis=1)
            norm = np.hypot(n[:, 0], n[:, 1])
            norm[norm == 0.0] = 1.0
            n /= norm[:, None]
            pa = np.einsum("pvd,pd->pv", a, n)
            pb = np.einsum("pvd,pd->pv", b, n)
            overlap = np.minimum(pa.max(axis=1), pb.max(axis=1)) - np.maximum(
                pa.min(axis=1), pb.min(axis=1)
            )
            result &= overlap > rel_tol * scale
    return result


def clip_convex(subject, clipper):
    """Sutherland-Hodgman clip of a convex polygon by a convex polygon.

    Both polygons are (k, 2) arrays; the clipper is reoriented to
    counterclockwise internally. Returns a list of points (possibly empty).
    """
    clipper = np.asarray(clipper, dtype=np.float64)
    if polygon_signed_area(clipper) < 0:
        clipper = clipper[::-1]
    poly = [np.asarray(q, dtype=np.float64) for q in subject]
    m = len(clipper)
    for i in range(m):
        if not poly:
            return []
        q1 = clipper[i]
        q2 = clipper[(i + 1) % m]
        d = q2 - q1
        out = []
        side = [d[0] * (v[1] - q1[1]) - d[1] * (v[0] - q1[0]) for v in poly]
        k = len(poly)
        for j in range(k):
            cur, nxt = poly[j], poly[(j + 1) % k]
            s_cur, s_nxt = side[j], side[(j + 1) % k]
            if s_cur >= 0:
                out.append(cur)
            if (s_cur > 0 and s_nxt < 0) or (s_cur < 0 and s_nxt > 0):
                t = s_cur / (s_cur - s_nxt)
                out.append(cur + t * (nxt - cur))
        poly = out
    return poly


def polygon_signed_area(poly):
    poly = np.asarray(poly, dtype=np.float64)
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_centroid(poly):
    """Area centroid; falls back to the vertex mean for ~zero-area input."""
    poly = np.asarray(poly, dtype=np.float64)
    a = polygon_signed_area(poly)
    if abs(a) < 1e-300:
        return poly.mean(axis=0)
    x, y = poly[:, 0], poly[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    cx = float(np.sum((x + xn) * cross)) / (6.0 * a)
    cy = float(np.sum((y + yn) * cross)) / (6.0 * a)
    return np.array([cx, cy])


def points_in_triangle(tri, pts, tol):
    """Closed-triangle membership mask via barycentric coordinates >= -tol."""
    lam = barycentric_coordinates(tri, pts)
    return np.all(lam >= -tol, axis=1)


def point_segment_distance(pts, a, b):
    """Distances from points (m, 2) to the closed segment [a, b]."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = b - a
    L2 = float(d @ d)
    if L2 == 0.0:
        return np.hypot(*(pts - a).T)
    t = np.clip(((pts - a) @ d) / L2, 0.0, 1.0)
    proj = a + t[:, None] * d
    return np.hypot(*(pts - proj).T)


def segment_contact_points(p1, p2, q1, q2, tol):
    """Contact points of two closed segments, as a list of (2,) arrays.

    Returns the proper crossing point, the touch point, or the two endpoints
    of a collinear overlap, all up to tolerance `tol` (an absolute length).
    """
    p1, p2, q1, q2 = (np.asarray(v, dtype=np.float64) for v in (p1, p2, q1, q2))
    d1 = p2 - p1
    d2 = q2 - q1
    L1 = float(np.hypot(*d1))
    L2 = float(np.hypot(*d2))
    if L1 == 0.0 or L2 == 0.0:
        return []
    denom = d1[0] * d2[1] - d1[1] * d2[0]
    if abs(denom) > tol * L1 * L2 / max(L1, L2):
        r = q1 - p1
        t = (r[0] * d2[1] - r[1] * d2[0]) / denom
        s = (r[0] * d1[1] - r[1] * d1[0]) / denom
        eps_t = tol / L1
        eps_s = tol / L2
        if -eps_t <= t <= 1 + eps_t and -eps_s <= s <= 1 + eps_s:
            return [p1 + t * d1]
        return []
    # parallel: require collinearity, then project the overlap interval
    off = q1 - p1
    if abs(off[0] * d1[1] - off[1] * d1[0]) > tol * L1:
        return []
    t1 = float(off @ d1) / (L1 * L1)
    t2 = float((q2 - p1) @ d1) / (L1 * L1)
    lo = max(0.0, min(t1, t2))
    hi = min(1.0, max(t1, t2))
    if hi < lo - tol / L1:
        return []
    pts = [p1 + lo * d1, p1 + hi * d1]
    if (hi - lo) * L1 <= tol:
        return [p1 + 0.5 * (lo + hi) * d1]
    return pts


def hull_contains(hull_pts, pts, tol):
    """Membership of points in the convex hull of 0 to 3 points.

    The hull is given by its (possibly repeated) generating points;
    duplicates within `tol` are merged first. Empty hull contains nothing.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    uniq = []
    for q in np.atleast_2d(np.asarray(hull_pts, dtype=np.float64)) if len(hull_pts) else []:
        if not any(np.hypot(*(q - u)) <= tol for u in uniq):
            uniq.append(q)
    if not uniq:
        return np.zeros(len(pts), dtype=bool)
    if len(uniq) == 1:
        return np.hypot(*(pts - uniq[0]).T) <= tol
    if len(uniq) == 2:
        return point_segment_distance(pts, uniq[0], uniq[1]) <= tol
    tri = np.stack(uniq)
    bary_tol = tol / max(np.abs(tri).max(), 1.0)
    return points_in_triangle(tri, pts, max(bary_tol, 1e-12))


def points_on_polygon_boundary(poly, pts, tol):
    """Mask of points within `tol` of the boundary of a polygon (vertex list)."""
    poly = np.asarray(poly, dtype=np.float64)
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    hit = np.zeros(len(pts), dtype=bool)
    m = len(poly)
    for i in range(m):
        hit |= point_segment_distance(pts, poly[i], poly[(i + 1) % m]) <= tol
    return hit


def points_in_polygon(poly, pts, tol):
    """Closed-polygon membership (convex or not) by crossing parity, padded by tol."""
    poly = np.asarray(poly, dtype=np.float64)
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    m = len(poly)
    j = m - 1
    for i in range(m):
        xi, yi = poly[i]
        xj, yj = poly[j]
        crosses = ((yi > y) != (yj > y)) & (
            x < (xj - xi) * (y - yi) / (yj - yi + 1e-300) + xi
        )
        inside ^= crosses
        j = i
    return inside | points_on_polygon_boundary(poly, pts, tol)
