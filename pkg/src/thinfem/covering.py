"""Virtual covers for bad elements: plans, derivation, and verification.

A cover plan assigns disjoint clusters of mesh elements to well-shaped
"virtual" triangles whose closures contain them. The general verifier checks
the five plan conditions (cover shape/size/placement + overlap multiplicity,
bad-element coverage + containment, neighbor minimum angles, cross-cover
vertex hulls, boundary vertex hulls); the isosceles verifier derives the
canonical one-element-per-cover plan and checks its simpler condition set.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _predicates as pred
from . import quality
from .errors import (
    AmbiguousLongestEdge,
    DimensionUnsupported,
    InvalidParam,
    InvalidPlan,
    ParseError,
)
from .geometry import (
    Simplex,
    barycentric_batch as _barycentric_batch,
    barycentric_coordinates,
    triangle_corner_angles,
    triangle_diameters,
)
from .mesh import UNIT_SQUARE, ConformalMesh, mesh_h

ANGLE_TOL = 1e-12
BARY_TOL = 1e-9  # cluster-containment tolerance in barycentric units


@dataclass(frozen=True)
class PlanParams:
    theta: float
    psi: float
    C: float
    M: int
    N: int

    def __post_init__(self):
        if self.theta <= 0 or self.psi <= 0:
            raise InvalidParam("theta and psi must be positive")
        if self.C < 1.0:
            raise InvalidParam("C must be >= 1")
        if self.M < 1 or self.N < 1:
            raise InvalidParam("M and N must be positive integers")


class VirtualCover:
    """A covering triangle plus the ids of the mesh elements it owns."""

    __slots__ = ("simplex", "elements")

    def __init__(self, simplex: Simplex, elements):
        elems = tuple(sorted(int(e) for e in elements))
        if not elems:
            raise InvalidPlan("cover cluster must be nonempty")
        if len(set(elems)) != len(elems):
            raise InvalidPlan("cover cluster repeats an element")
        self.simplex = simplex
        self.elements = elems


@dataclass
class CoverPlan:
    covers: list
    params: PlanParams


@dataclass
class ConditionVerdict:
    passed: bool = True
    violations: list = field(default_factory=list)

    def fail(self, witness):
        self.passed = False
        self.violations.append(witness)


@dataclass
class CheckReport:
    """Per-condition verdicts plus the measured plan characteristics."""

    conditions: dict
    multiplicity: int = 0
    max_cluster_size: int = 0
    max_cover_h_ratio: float = 0.0

    @property
    def satisfied(self):
        return all(v.passed for v in self.conditions.values())

    def to_dict(self):
        return {
            "satisfied": self.satisfied,
            "conditions": {
                name: {"passed": v.passed, "violations": v.violations}
                for name, v in self.conditions.items()
            },
            "multiplicity": self.multiplicity,
            "max_cluster_size": self.max_cluster_size,
            "max_cover_h_ratio": self.max_cover_h_ratio,
        }


# ---------------------------------------------------------------------------
# hulls


def shared_hull(t1: Simplex, t2: Simplex, tol: float):
    """Generating points of Conv(v(T1) & v(T2)): the coordinate-shared vertices."""
    out = []
    for p in t1.vertices:
        if any(np.hypot(*(p - q)) <= tol for q in t2.vertices):
            out.append(np.array(p))
    return out


def boundary_hull(t1: Simplex, boundary, tol: float):
    """Generating points of Conv(v(T1) & boundary polygon)."""
    mask = pred.points_on_polygon_boundary(boundary, t1.vertices, tol)
    return [np.array(p) for p, hit in zip(t1.vertices, mask) if hit]


# ---------------------------------------------------------------------------
# spatial support


class _BBoxGrid:
    """Uniform hash grid over triangle bounding boxes; cell >= largest extent."""

    def __init__(self, tris):
        self.tris = np.asarray(tris, dtype=np.float64)
        self.boxes = pred.triangle_bboxes(self.tris)
        ext = np.maximum(
            self.boxes[:, 2] - self.boxes[:, 0], self.boxes[:, 3] - self.boxes[:, 1]
        )
        self.cell = float(ext.max()) if len(ext) else 1.0
        if self.cell <= 0.0:
            self.cell = 1.0
        centers = np.stack(
            [
                (self.boxes[:, 0] + self.boxes[:, 2]) / 2,
                (self.boxes[:, 1] + self.boxes[:, 3]) / 2,
            ],
            axis=1,
        )
        keys = np.floor(centers / self.cell).astype(np.int64)
        self.buckets = {}
        for i, (kx, ky) in enumerate(keys):
            self.buckets.setdefault((int(kx), int(ky)), []).append(i)
        self.keys = keys

    def candidate_pairs(self):
        """(i, j) arrays of covers whose boxes may overlap (i < j)."""
        ia, ja = [], []
        for (kx, ky), members in self.buckets.items():
            for dx in (-1, 0, 1):
                for dy in (-1, 0, 1):
                    other = self.buckets.get((kx + dx, ky + dy))
                    if other is None:
                        continue
                    for i in members:
                        for j in other:
                            if i < j:
                                ia.append(i)
                                ja.append(j)
        if not ia:
            return np.empty(0, np.int64), np.empty(0, np.int64)
        ia = np.asarray(ia, np.int64)
        ja = np.asarray(ja, np.int64)
        keep = pred.bboxes_overlap(self.boxes[ia], self.boxes[ja])
        return ia[keep], ja[keep]

    def candidates_at(self, p):
        kx, ky = (int(math.floor(c / self.cell)) for c in p)
        out = []
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                out.extend(self.buckets.get((kx + dx, ky + dy), ()))
        return out


def _interior_overlap_pairs(grid):
    ia, ja = grid.candidate_pairs()
    if len(ia) == 0:
        return ia, ja
    ov = pred.positive_area_overlap(grid.tris[ia], grid.tris[ja])
    return ia[ov], ja[ov]


def _overlap_multiplicity(grid, pairs):
    """Max number of covers containing any pairwise-overlap witness point."""
    ia, ja = pairs
    n_covers = len(grid.tris)
    if n_covers == 0:
        return 0, []
    if len(ia) == 0:
        return 1, []
    points, owners = [], []
    for i, j in zip(ia, ja):
        poly = pred.clip_convex(grid.tris[i], grid.tris[j])
        if len(poly) < 3:
            continue
        w = pred.polygon_centroid(poly)
        cand = grid.candidates_at(w)
        points.append((int(i), int(j), w))
        owners.append(cand)
    if not points:
        return 1, []
    # batched membership test: one (pair, candidate) row per combination
    tri_rows = np.concatenate([grid.tris[c] for c in owners])
    pt_rows = np.concatenate(
        [np.repeat(w[None], len(c), axis=0) for (_, _, w), c in zip(points, owners)]
    )
    lam = _barycentric_batch(tri_rows, pt_rows[:, None, :])[:, 0, :]
    member = (lam >= -1e-12).all(axis=1)
    best = 1
    witnesses = []
    pos = 0
    for (i, j, w), cand in zip(points, owners):
        count = int(member[pos : pos + len(cand)].sum())
        pos += len(cand)
        witnesses.append((i, j, w.tolist(), count))
        best = max(best, count)
    return best, witnesses


# ---------------------------------------------------------------------------
# general plan verification


def _plan_arrays(m, plan):
    """Flat (cover_id, element_id) arrays over all clusters, with id checks."""
    cover_ids, elem_ids = [], []
    for k, cover in enumerate(plan.covers):
        if cover.simplex.dim != 2:
            raise InvalidPlan("cover simplices must be triangles")
        for e in cover.elements:
            if not 0 <= e < m.n_elements:
                raise InvalidPlan(f"cover {k} references element {e} out of range")
            cover_ids.append(k)
            elem_ids.append(e)
    return np.asarray(cover_ids, np.int64), np.asarray(elem_ids, np.int64)


def verify_cover_plan(m: ConformalMesh, plan: CoverPlan, boundary=UNIT_SQUARE) -> CheckReport:
    """Check the five cover-plan conditions on a 2D mesh.

    Violations are collected as witnesses, not raised. Conditions:
      "1" cover shape (min angle >= psi), size (h_T <= C h), placement
          (interior inside the domain polygon) and overlap multiplicity <= M;
      "2" every bad element clustered, clusters disjoint and inside their
          covers, cluster size <= N;
      "3" uncovered elements sharing a vertex with a covered element away
          from the cover's own vertices have minimum angle >= theta;
      "4" vertices shared across two clusters lie in the convex hull of the
          covers' shared vertices;
      "5" clustered vertices on the domain boundary lie in the convex hull
          of their cover's boundary vertices.
    """
    if m.dim != 2:
        raise DimensionUnsupported("cover verification is 2D only")
    params = plan.params
    cover_ids, elem_ids = _plan_arrays(m, plan)
    conditions = {str(i): ConditionVerdict() for i in "12345"}
    c1, c2, c3, c4, c5 = (conditions[str(i)] for i in "12345")
    report = CheckReport(conditions=conditions)
    h = mesh_h(m)
    tol_v = 1e-9 * h
    n_covers = len(plan.covers)
    report.max_cluster_size = max(
        (len(c.elements) for c in plan.covers), default=0
    )

    # --- condition 1: shape, size, placement, multiplicity
    boundary = np.asarray(boundary, dtype=np.float64)
    if n_covers:
        tris = np.stack([c.simplex.vertices for c in plan.covers])
        angles = triangle_corner_angles(tris)
        diam = triangle_diameters(tris)
        report.max_cover_h_ratio = float(diam.max() / h)
        for k in range(n_covers):
            tmin = float(angles[k].min())
            if tmin < params.psi - ANGLE_TOL:
                c1.fail({"kind": "cover-min-angle", "cover": k, "theta_min": tmin})
            if diam[k] > params.C * h * (1 + 1e-12):
                c1.fail(
                    {"kind": "cover-size", "cover": k, "h_T": float(diam[k]),
                     "limit": params.C * h}
                )
            probes = np.concatenate(
                [tris[k], (tris[k] + np.roll(tris[k], -1, axis=0)) / 2.0]
            )
            if not np.all(pred.points_in_polygon(boundary, probes, tol_v)):
                c1.fail({"kind": "cover-outside-domain", "cover": k})
        grid = _BBoxGrid(tris)
        pairs = _interior_overlap_pairs(grid)
        mult, witnesses = _overlap_multiplicity(grid, pairs)
        report.multiplicity = mult
        if mult > params.M:
            c1.fail(
                {"kind": "multiplicity", "measured": mult, "limit": params.M,
                 "witnesses": witnesses}
            )
    else:
        report.multiplicity = 0

    # --- condition 2: coverage, disjointness, containment, cluster size
    owner = np.full(m.n_elements, -1, dtype=np.int64)
    for k, e in zip(cover_ids, elem_ids):
        if owner[e] >= 0:
            c2.fail(
                {"kind": "clusters-not-disjoint", "element": int(e),
                 "covers": [int(owner[e]), int(k)]}
            )
        else:
            owner[e] = k
    cls = quality.classify(m, params.theta)
    for e in cls.bad_elements:
        if owner[e] < 0:
            c2.fail({"kind": "bad-uncovered", "element": int(e)})
    ep = m.element_points()
    for k, cover in enumerate(plan.covers):
        if len(cover.elements) > params.N:
            c2.fail(
                {"kind": "cluster-too-big", "cover": k,
                 "size": len(cover.elements), "limit": params.N}
            )
        tri = cover.simplex.vertices
        for e in cover.elements:
            lam = barycentric_coordinates(tri, ep[e])
            if not np.all(lam >= -BARY_TOL):
                c2.fail(
                    {"kind": "cluster-outside-cover", "cover": k, "element": int(e)}
                )

    # --- condition 3: neighbor minimum angles at non-cover vertices
    covered = owner >= 0
    theta = params.theta
    for k, e in zip(cover_ids, elem_ids):
        tri_cover = plan.covers[k].simplex.vertices
        for v in m.elements[e]:
            p = m.points[v]
            if any(np.hypot(*(p - q)) <= tol_v for q in tri_cover):
                continue
            for t0 in m.elements_at_vertex(int(v)):
                if covered[t0]:
                    continue
                if cls.theta_min[t0] < theta - ANGLE_TOL:
                    c3.fail(
                        {"kind": "neighbor-min-angle", "element": int(t0),
                         "vertex": int(v), "cover": int(k),
                         "theta_min": float(cls.theta_min[t0])}
                    )

    # --- condition 4: cross-cover shared vertices inside shared hulls
    vertex_covers = {}
    for k, e in zip(cover_ids, elem_ids):
        for v in m.elements[e]:
            s = vertex_covers.setdefault(int(v), set())
            s.add(int(k))
    for v, ks in sorted(vertex_covers.items()):
        if len(ks) < 2:
            continue
        ks = sorted(ks)
        p = m.points[v]
        for a in range(len(ks)):
            for b in range(a + 1, len(ks)):
                hull = shared_hull(
                    plan.covers[ks[a]].simplex, plan.covers[ks[b]].simplex, tol_v
                )
                if not hull or not pred.hull_contains(hull, p[None], tol_v)[0]:
                    c4.fail(
                        {"kind": "cross-cover-vertex", "vertex": int(v),
                         "covers": [ks[a], ks[b]]}
                    )

    # --- condition 5: clustered boundary vertices inside boundary hulls
    for k, cover in enumerate(plan.covers):
        hull = None
        for e in cover.elements:
            verts = m.elements[e]
            on_b = pred.points_on_polygon_boundary(boundary, m.points[verts], tol_v)
            for v, hit in zip(verts, on_b):
                if not hit:
                    continue
                if hull is None:
                    hull = boundary_hull(cover.simplex, boundary, tol_v)
                if not hull or not pred.hull_contains(
                    hull, m.points[v][None], tol_v
                )[0]:
                    c5.fail(
                        {"kind": "boundary-vertex", "vertex": int(v), "cover": k}
                    )
    return report


# ---------------------------------------------------------------------------
# isosceles covers (2D auto-derivation)


def _longest_edge(tri):
    """(edge index, length, a, b, opposite vertex); ties raise."""
    pts = [tri[0], tri[1], tri[2]]
    lengths = [
        float(np.hypot(*(pts[(i + 1) % 3] - pts[i]))) for i in range(3)
    ]
    order = sorted(range(3), key=lambda i: -lengths[i])
    if lengths[order[0]] - lengths[order[1]] <= 1e-12 * lengths[order[0]]:
        raise AmbiguousLongestEdge(
            f"edges {order[0]} and {order[1]} tie as longest "
            f"({lengths[order[0]]!r} vs {lengths[order[1]]!r})"
        )
    i = order[0]
    return i, lengths[i], pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]


def derive_isosceles_cover(m: ConformalMesh, phi: float) -> CoverPlan:
    """Erect an isosceles cover (base angles phi) over every flat element.

    An element qualifies when theta_max > pi - phi. Its cover shares the
    element's longest edge, with the apex on the element's side; each
    cluster is the single element. Plan parameters: theta = phi/2,
    psi = phi, C = max(1, max_k h_{T_k}/h), M = N = 1.
    """
    if m.dim != 2:
        raise DimensionUnsupported("isosceles covers are 2D only")
    if not 0.0 < phi < math.pi / 2:
        raise InvalidParam("phi must lie in (0, pi/2)")
    tmin, tmax = quality.element_angle_table(m)
    bad = np.flatnonzero(tmax > math.pi - phi)
    ep = m.element_points()
    covers = []
    tan_phi = math.tan(phi)
    max_ht = 0.0
    for e in bad:
        _, L, a, b, c = _longest_edge(ep[e])
        mid = (a + b) / 2.0
        d = (b - a) / L
        n = np.array([-d[1], d[0]])
        side = 1.0 if (d[0] * (c - a)[1] - d[1] * (c - a)[0]) > 0 else -1.0
        apex = mid + side * n * (L / 2.0) * tan_phi
        covers.append(VirtualCover(Simplex([a, b, apex]), (int(e),)))
        max_ht = max(max_ht, L, L / (2.0 * math.cos(phi)))
    C = 1.0
    if covers:
        C = max(1.0, max_ht / mesh_h(m))
    params = PlanParams(theta=phi / 2.0, psi=phi, C=C, M=1, N=1)
    return CoverPlan(covers=covers, params=params)


def verify_isosceles_cover(
    m: ConformalMesh, phi: float, boundary=UNIT_SQUARE
) -> CheckReport:
    """Derive the isosceles plan and check its condition set.

    Conditions reported: "1" pairwise interior-disjoint covers, cover shape,
    covers inside the domain; "2" each flat element inside its cover's
    interior with coinciding longest edges; "3" every element sharing an
    apex vertex, other than the covered flat elements themselves, has
    minimum angle >= phi/2. ("4"/"5" pass vacuously here; run
    verify_cover_plan on the derived plan for the full general check.)
    """
    plan = derive_isosceles_cover(m, phi)
    conditions = {str(i): ConditionVerdict() for i in "12345"}
    c1, c2, c3 = conditions["1"], conditions["2"], conditions["3"]
    report = CheckReport(conditions=conditions)
    n_covers = len(plan.covers)
    report.max_cluster_size = 1 if n_covers else 0
    if n_covers == 0:
        return report
    h = mesh_h(m)
    tol_v = 1e-9 * h
    boundary = np.asarray(boundary, dtype=np.float64)
    tris = np.stack([c.simplex.vertices for c in plan.covers])
    elems = np.fromiter((c.elements[0] for c in plan.covers), np.int64, n_covers)
    report.max_cover_h_ratio = float(triangle_diameters(tris).max() / h)

    amin = triangle_corner_angles(tris).min(axis=1)
    for k in np.flatnonzero(amin < phi - ANGLE_TOL):
        c1.fail({"kind": "cover-min-angle", "cover": int(k)})
    probes = np.concatenate([tris, (tris + np.roll(tris, -1, axis=1)) / 2.0], axis=1)
    inside = pred.points_in_polygon(
        boundary, probes.reshape(-1, 2), tol_v
    ).reshape(n_covers, 6)
    for k in np.flatnonzero(~inside.all(axis=1)):
        c1.fail({"kind": "cover-outside-domain", "cover": int(k)})
    grid = _BBoxGrid(tris)
    ia, ja = _interior_overlap_pairs(grid)
    mult, _ = _overlap_multiplicity(grid, (ia, ja))
    report.multiplicity = mult
    for i, j in zip(ia.tolist(), ja.tolist()):
        c1.fail({"kind": "covers-overlap", "covers": [i, j]})

    ep = m.element_points()
    covered = np.zeros(m.n_elements, dtype=bool)
    covered[elems] = True
    tmin = quality.element_angle_table(m)[0]
    half_phi = phi / 2.0

    pts = ep[elems]  # (n_covers, 3, 2)
    lam = _barycentric_batch(tris, pts)
    near_cover_vertex = (
        np.linalg.norm(pts[:, :, None, :] - tris[:, None, :, :], axis=3) <= tol_v
    )  # (n_covers, elem vertex, cover vertex)
    base_hits = near_cover_vertex[:, :, :2].any(axis=2).sum(axis=1)
    contained = (lam >= -BARY_TOL).all(axis=(1, 2))
    for k in np.flatnonzero((base_hits != 2) | ~contained):
        c2.fail(
            {"kind": "element-outside-cover", "cover": int(k),
             "element": int(elems[k])}
        )
    apex_mask = ~near_cover_vertex.any(axis=2)  # (n_covers, elem vertex)
    strict = (lam > 1e-14).all(axis=2)
    for k, i in zip(*np.nonzero(apex_mask & ~strict)):
        c2.fail(
            {"kind": "element-touches-cover-boundary", "cover": int(k),
             "element": int(elems[k])}
        )
    indptr, adj = m.vertex_to_elements()
    bad_tmin = tmin < half_phi - ANGLE_TOL
    for k, i in zip(*np.nonzero(apex_mask)):
        v = int(m.elements[elems[k]][i])
        for t0 in adj[indptr[v] : indptr[v + 1]]:
            if covered[t0] or not bad_tmin[t0]:
                continue
            c3.fail(
                {"kind": "neighbor-min-angle", "element": int(t0),
                 "vertex": v, "cover": int(k), "theta_min": float(tmin[t0])}
            )
    return report


# ---------------------------------------------------------------------------
# bound coefficient and valence bound


def error_bound_coefficient(
    n: int, theta: float, psi: float, C: float, M: int, N: int,
    A: float, B: float, D: float,
) -> float:
    """Coefficient E in the interpolation bound |u - Pu|_H1 <= E h |u|_H2.

    E = sqrt(A^2 (n+2+C^2 M) + 2(n+1)(n+2) pi B^2 C^(4-n) D M N / (n theta)).
    A, B, D are the caller's stand-ins for the shape/embedding/regularity
    constants (only their existence is known in general).
    """
    if n not in (2, 3):
        raise InvalidParam("n must be 2 or 3")
    for name, val in (
        ("theta", theta), ("psi", psi), ("C", C), ("M", M), ("N", N),
        ("A", A), ("B", B), ("D", D),
    ):
        if val <= 0:
            raise InvalidParam(f"{name} must be positive")
    first = A * A * (n + 2 + C * C * M)
    second = 2.0 * (n + 1) * (n + 2) * math.pi * B * B * C ** (4 - n) * D * M * N
    return math.sqrt(first + second / (n * theta))


def vertex_valence_bound(m: ConformalMesh, plan: CoverPlan):
    """Check the floor(2(n-1)pi/theta) valence bound around cluster vertices.

    Counts, for every vertex of every clustered element, the uncovered
    elements with theta_min >= theta sharing that vertex. Returns
    (ok, bound, worst_count, witness).
    """
    theta = plan.params.theta
    n = m.dim
    bound = math.floor(2 * (n - 1) * math.pi / theta)
    cover_ids, elem_ids = _plan_arrays(m, plan)
    covered = np.zeros(m.n_elements, dtype=bool)
    covered[elem_ids] = True
    tmin = quality.element_angle_table(m)[0]
    in_w = ~covered & (tmin >= theta - ANGLE_TOL)
    worst, witness = 0, None
    for e in elem_ids:
        for v in m.elements[e]:
            count = int(np.sum(in_w[m.elements_at_vertex(int(v))]))
            if count > worst:
                worst, witness = count, {"vertex": int(v), "element": int(e)}
    return worst <= bound, bound, worst, witness


# ---------------------------------------------------------------------------
# plan file format
#
#   cover-plan
#   params theta <r> psi <r> C <r> M <i> N <i>
#   covers <m>
#   T <x1> <y1> <x2> <y2> <x3> <y3>
#   Q <element id> ...


def write_plan(plan: CoverPlan, path) -> None:
    p = plan.params
    lines = [
        "cover-plan",
        f"params theta {p.theta!r} psi {p.psi!r} C {p.C!r} M {p.M} N {p.N}",
        f"covers {len(plan.covers)}",
    ]
    for cover in plan.covers:
        coords = " ".join(repr(float(c)) for c in cover.simplex.vertices.ravel())
        lines.append(f"T {coords}")
        lines.append("Q " + " ".join(str(e) for e in cover.elements))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_plan(path) -> CoverPlan:
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines()]
    pos = 0

    def take():
        nonlocal pos
        while pos < len(lines) and not lines[pos]:
            pos += 1
        if pos >= len(lines):
            raise ParseError("unexpected end of file", line=len(lines))
        pos += 1
        return lines[pos - 1]

    if take() != "cover-plan":
        raise ParseError("missing 'cover-plan' header", line=pos)
    raw = take().split()
    if len(raw) != 11 or raw[0] != "params":
        raise ParseError("malformed params line", line=pos)
    try:
        kv = {raw[i]: raw[i + 1] for i in range(1, 11, 2)}
        params = PlanParams(
            theta=float(kv["theta"]), psi=float(kv["psi"]), C=float(kv["C"]),
            M=int(kv["M"]), N=int(kv["N"]),
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad params: {exc}", line=pos) from None
    raw = take().split()
    if len(raw) != 2 or raw[0] != "covers":
        raise ParseError("expected 'covers <count>'", line=pos)
    count = int(raw[1])
    covers = []
    for _ in range(count):
        raw = take().split()
        if len(raw) != 7 or raw[0] != "T":
            raise ParseError("expected 'T <6 coordinates>'", line=pos)
        try:
            coords = np.asarray([float(c) for c in raw[1:]]).reshape(3, 2)
        except ValueError:
            raise ParseError("bad cover coordinates", line=pos) from None
        raw = take().split()
        if len(raw) < 2 or raw[0] != "Q":
            raise ParseError("expected 'Q <element ids>'", line=pos)
        try:
            elems = [int(e) for e in raw[1:]]
        except ValueError:
            raise ParseError("bad cluster element id", line=pos) from None
        covers.append(VirtualCover(Simplex(coords), elems))
    return CoverPlan(covers=covers, params=params)
