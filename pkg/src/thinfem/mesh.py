"""Conformal simplicial meshes: representation, generators, checking, file I/O.

Generated meshes live on the unit square. Elements are stored counterclockwise
and vertices are deduplicated by index arithmetic in the generators, never by
coordinate hashing.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _predicates as pred
from . import geometry
from .errors import EmptyMesh, InvalidParam, ParseError

UNIT_SQUARE = ((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))


@dataclass(frozen=True)
class MeshQualityParams:
    """The two fixed angle thresholds a mesh is judged against.

    theta drives the good/ordinary/bad split of mesh elements; psi is the
    minimum-angle requirement on virtual covering triangles. Both live in
    (0, pi/3].
    """

    theta: float
    psi: float

    def __post_init__(self):
        limit = math.pi / 3
        if not 0.0 < self.theta <= limit:
            raise InvalidParam("theta must lie in (0, pi/3]")
        if not 0.0 < self.psi <= limit:
            raise InvalidParam("psi must lie in (0, pi/3]")


class ConformalMesh:
    """Vertex table + element connectivity + boundary vertex markers.

    Immutable after construction; arrays are set read-only so concurrent
    reads are safe.
    """

    def __init__(self, points, elements, boundary_vertices):
        pts = np.ascontiguousarray(points, dtype=np.float64)
        elems = np.ascontiguousarray(elements, dtype=np.int64)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise ValueError(f"points must be (n, 2) or (n, 3), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("mesh coordinates must be finite")
        dim = pts.shape[1]
        if elems.ndim != 2 or elems.shape[1] != dim + 1:
            raise ValueError(f"elements must be (m, {dim + 1}), got {elems.shape}")
        if elems.size and (elems.min() < 0 or elems.max() >= len(pts)):
            raise ValueError("element vertex index out of range")
        for row in elems:
            if len(set(row.tolist())) != dim + 1:
                raise ValueError(f"element {row.tolist()} repeats a vertex")
        bnd = np.unique(np.asarray(list(boundary_vertices), dtype=np.int64))
        if bnd.size and (bnd.min() < 0 or bnd.max() >= len(pts)):
            raise ValueError("boundary vertex index out of range")
        pts.setflags(write=False)
        elems.setflags(write=False)
        bnd.setflags(write=False)
        self.points = pts
        self.elements = elems
        self.boundary_vertices = bnd
        self._element_points = None
        self._adjacency = None

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def n_vertices(self):
        return len(self.points)

    @property
    def n_elements(self):
        return len(self.elements)

    def element_points(self):
        """(n_elements, dim+1, dim) coordinate array, cached."""
        if self._element_points is None:
            ep = self.points[self.elements]
            ep.setflags(write=False)
            self._element_points = ep
        return self._element_points

    def boundary_mask(self):
        mask = np.zeros(self.n_vertices, dtype=bool)
        mask[self.boundary_vertices] = True
        return mask

    def vertex_to_elements(self):
        """CSR-style vertex->element adjacency (indptr, element_ids), cached."""
        if self._adjacency is None:
            nv = self.n_vertices
            verts = self.elements.ravel()
            elems = np.repeat(np.arange(self.n_elements, dtype=np.int64), self.dim + 1)
            order = np.lexsort((elems, verts))
            verts, elems = verts[order], elems[order]
            indptr = np.zeros(nv + 1, dtype=np.int64)
            np.add.at(indptr, verts + 1, 1)
            np.cumsum(indptr, out=indptr)
            self._adjacency = (indptr, elems)
        return self._adjacency

    def elements_at_vertex(self, v):
        indptr, elems = self.vertex_to_elements()
        return elems[indptr[v] : indptr[v + 1]]

    def simplex(self, e):
        return geometry.Simplex(self.element_points()[e])


def mesh_h(m: ConformalMesh) -> float:
    """Largest element diameter."""
    if m.n_elements == 0:
        raise EmptyMesh("mesh has no elements")
    ep = m.element_points()
    best = 0.0
    for i, j in itertools.combinations(range(m.dim + 1), 2):
        d = np.linalg.norm(ep[:, i] - ep[:, j], axis=1)
        best = max(best, float(d.max()))
    return best


# ---------------------------------------------------------------------------
# generators


def _grid_index(i, j, K):
    return j * (K + 1) + i


def _grid_points(K):
    pts = np.empty(((K + 1) ** 2, 2))
    for j in range(K + 1):
        for i in range(K + 1):
            pts[_grid_index(i, j, K)] = (i / K, j / K)
    return pts


def _grid_boundary(K):
    return [
        _grid_index(i, j, K)
        for j in range(K + 1)
        for i in range(K + 1)
        if i in (0, K) or j in (0, K)
    ]


def generate_square_six(K: int, alpha: float) -> ConformalMesh:
    """Unit-square mesh of K^2 cells, each cut into six triangles.

    Each cell [x, x+k]^2 (k = 1/K) gets two interior points on its vertical
    midline, at heights alpha*k and (1-alpha)*k above the cell floor, and is
    triangulated so that the bottom and top triangles become arbitrarily
    flat as alpha -> 0.
    """
    if K < 1:
        raise InvalidParam("K must be a positive integer")
    if not 0.0 < alpha < 0.5:
        raise InvalidParam("alpha must lie in (0, 1/2)")
    pts = np.empty(((K + 1) ** 2 + 2 * K * K, 2))
    pts[: (K + 1) ** 2] = _grid_points(K)
    elements = []
    base = (K + 1) ** 2
    for cj in range(K):
        for ci in range(K):
            a = _grid_index(ci, cj, K)
            b = _grid_index(ci + 1, cj, K)
            c = _grid_index(ci + 1, cj + 1, K)
            d = _grid_index(ci, cj + 1, K)
            e = base + 2 * (cj * K + ci)
            f = e + 1
            pts[e] = ((ci + 0.5) / K, (cj + alpha) / K)
            pts[f] = ((ci + 0.5) / K, (cj + 1 - alpha) / K)
            elements += [
                (a, b, e),
                (b, c, e),
                (c, f, e),
                (a, e, f),
                (c, d, f),
                (a, f, d),
            ]
    return ConformalMesh(pts, elements, _grid_boundary(K))


def generate_uniform_right(K: int) -> ConformalMesh:
    """K^2 squares split into two right isosceles triangles by the same diagonal."""
    if K < 1:
        raise InvalidParam("K must be a positive integer")
    elements = []
    for cj in range(K):
        for ci in range(K):
            a = _grid_index(ci, cj, K)
            b = _grid_index(ci + 1, cj, K)
            c = _grid_index(ci + 1, cj + 1, K)
            d = _grid_index(ci, cj + 1, K)
            elements += [(a, b, c), (a, c, d)]
    return ConformalMesh(_grid_points(K), elements, _grid_boundary(K))


def generate_refined_diag(K: int, eps: float = 0.05) -> ConformalMesh:
    """Refinement of generate_uniform_right(K) into six triangles per square.

    Two points are placed on the anti-diagonal of each square, at parameters
    1/2 -+ eps from the upper-left corner, and connected so that each parent
    right triangle splits into three children; the two children straddling
    the drawn diagonal are thin, with theta_max -> pi as eps -> 0. The
    interior connectivity is fixed to this layout.
    """
    if K < 1:
        raise InvalidParam("K must be a positive integer")
    if not 0.0 < eps < 0.5:
        raise InvalidParam("eps must lie in (0, 1/2)")
    pts = np.empty(((K + 1) ** 2 + 2 * K * K, 2))
    pts[: (K + 1) ** 2] = _grid_points(K)
    elements = []
    base = (K + 1) ** 2
    for cj in range(K):
        for ci in range(K):
            a = _grid_index(ci, cj, K)
            b = _grid_index(ci + 1, cj, K)
            c = _grid_index(ci + 1, cj + 1, K)
            d = _grid_index(ci, cj + 1, K)
            e = base + 2 * (cj * K + ci)
            f = e + 1
            # E below the main diagonal, F above, both on the anti-diagonal
            pts[e] = ((ci + 0.5 + eps) / K, (cj + 0.5 - eps) / K)
            pts[f] = ((ci + 0.5 - eps) / K, (cj + 0.5 + eps) / K)
            elements += [
                (a, b, e),
                (b, c, e),
                (a, e, c),
                (a, c, f),
                (c, d, f),
                (a, f, d),
            ]
    return ConformalMesh(pts, elements, _grid_boundary(K))


# ---------------------------------------------------------------------------
# conformity checking


@dataclass
class ConformityReport:
    """Violation lists from check_conformity; empty lists <=> conformal."""

    hanging: list = field(default_factory=list)
    duplicates: list = field(default_factory=list)
    inverted: list = field(default_factory=list)
    total_measure: float = 0.0
    declared_measure: float | None = None

    @property
    def conformal(self):
        return not (self.hanging or self.duplicates or self.inverted)

    @property
    def measure_ok(self):
        if self.declared_measure is None:
            return True
        return abs(self.total_measure - self.declared_measure) <= 1e-12


def _contact_set(ta, tb, tol):
    """Contact points of two closed triangles known to have ~zero overlap area."""
    pts = []
    for p in ta:
        if pred.points_in_triangle(tb, p[None], 1e-9)[0]:
            pts.append(p)
    for p in tb:
        if pred.points_in_triangle(ta, p[None], 1e-9)[0]:
            pts.append(p)
    for i in range(3):
        for j in range(3):
            pts.extend(
                pred.segment_contact_points(
                    ta[i], ta[(i + 1) % 3], tb[j], tb[(j + 1) % 3], tol
                )
            )
    uniq = []
    for p in pts:
        if not any(np.hypot(*(p - q)) <= tol for q in uniq):
            uniq.append(p)
    return uniq


def _is_vertex_of(p, tri, tol):
    return any(np.hypot(*(p - v)) <= tol for v in tri)


def check_conformity(m: ConformalMesh, declared_measure=None) -> ConformityReport:
    """Brute-force pairwise conformity check (2D).

    Reports: hanging-node contacts (two elements meeting in anything other
    than a shared full edge or a shared vertex), duplicated and
    inverted/degenerate elements, and the total measure against an optional
    declared domain measure. Violations are data, not errors.
    """
    report = ConformityReport(declared_measure=declared_measure)
    if m.dim != 2:
        raise NotImplementedError("conformity checking is implemented for 2D meshes")
    ep = m.element_points()
    areas = geometry.triangle_signed_areas(ep)
    report.total_measure = float(np.abs(areas).sum())
    for e, a in enumerate(areas):
        if abs(a) < geometry.MEASURE_FLOOR:
            report.inverted.append((int(e), "degenerate"))
        elif a < 0:
            report.inverted.append((int(e), "clockwise"))

    seen = {}
    for e, row in enumerate(m.elements):
        key = frozenset(row.tolist())
        if key in seen:
            report.duplicates.append((seen[key], e))
        else:
            seen[key] = e

    if m.n_elements < 2:
        return report
    scale = mesh_h(m)
    tol = 1e-9 * scale
    boxes = pred.triangle_bboxes(ep)
    ia, ja = np.triu_indices(m.n_elements, k=1)
    keep = pred.bboxes_overlap(boxes[ia], boxes[ja], margin=tol)
    ia, ja = ia[keep], ja[keep]
    overlap = pred.positive_area_overlap(ep[ia], ep[ja])
    for i, j, ov in zip(ia, ja, overlap):
        ta, tb = ep[i], ep[j]
        if frozenset(m.elements[i].tolist()) == frozenset(m.elements[j].tolist()):
            continue  # already reported as duplicate
        if ov:
            report.hanging.append((int(i), int(j), "area-overlap", None))
            continue
        contact = _contact_set(ta, tb, tol)
        if not contact:
            continue
        dmax, pair = 0.0, (contact[0], contact[0])
        for p, q in itertools.combinations(contact, 2):
            d = float(np.hypot(*(p - q)))
            if d > dmax:
                dmax, pair = d, (p, q)
        if dmax <= tol:
            p = contact[0]
            if not (_is_vertex_of(p, ta, tol) and _is_vertex_of(p, tb, tol)):
                report.hanging.append((int(i), int(j), "point-contact", p.tolist()))
        else:
            a, b = pair
            ok = all(
                _is_vertex_of(p, ta, tol) and _is_vertex_of(p, tb, tol)
                for p in (a, b)
            )
            if not ok:
                report.hanging.append(
                    (int(i), int(j), "partial-edge", [a.tolist(), b.tolist()])
                )
    return report


# ---------------------------------------------------------------------------
# file format: line-oriented text, full-precision decimals
#
#   simplex-mesh <dim>
#   vertices <count>
#   <x> <y> [<z>]        (one vertex per line, repr round-trip precision)
#   elements <count>
#   <i> <j> <k> [<l>]
#   boundary <count>
#   <index>


def write_mesh(m: ConformalMesh, path) -> None:
    lines = [f"simplex-mesh {m.dim}", f"vertices {m.n_vertices}"]
    lines += [" ".join(repr(float(c)) for c in p) for p in m.points]
    lines.append(f"elements {m.n_elements}")
    lines += [" ".join(str(int(i)) for i in row) for row in m.elements]
    lines.append(f"boundary {len(m.boundary_vertices)}")
    lines += [str(int(i)) for i in m.boundary_vertices]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mesh(path) -> ConformalMesh:
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()

    pos = 0

    def take(expect=None):
        nonlocal pos
        while pos < len(lines) and not lines[pos].strip():
            pos += 1
        if pos >= len(lines):
            raise ParseError("unexpected end of file", line=len(lines))
        ln = lines[pos].strip()
        pos += 1
        if expect is not None:
            parts = ln.split()
            if len(parts) != 2 or parts[0] != expect:
                raise ParseError(f"expected '{expect} <count>', got {ln!r}", line=pos)
            try:
                return int(parts[1])
            except ValueError:
                raise ParseError(f"bad count in {ln!r}", line=pos) from None
        return ln

    header = take()
    parts = header.split()
    if len(parts) != 2 or parts[0] != "simplex-mesh":
        raise ParseError(f"bad header {header!r}", line=pos)
    try:
        dim = int(parts[1])
    except ValueError:
        raise ParseError(f"bad dimension in header {header!r}", line=pos) from None
    if dim not in (2, 3):
        raise ParseError(f"unsupported dimension {dim}", line=pos)

    nv = take("vertices")
    pts = np.empty((nv, dim))
    for i in range(nv):
        raw = take().split()
        if len(raw) != dim:
            raise ParseError(f"expected {dim} coordinates", line=pos)
        try:
            pts[i] = [float(c) for c in raw]
        except ValueError:
            raise ParseError(f"bad coordinate in {raw!r}", line=pos) from None

    ne = take("elements")
    if ne == 0:
        raise EmptyMesh("mesh file declares zero elements")
    elems = np.empty((ne, dim + 1), dtype=np.int64)
    for i in range(ne):
        raw = take().split()
        if len(raw) != dim + 1:
            raise ParseError(f"expected {dim + 1} vertex indices", line=pos)
        try:
            row = [int(c) for c in raw]
        except ValueError:
            raise ParseError(f"bad vertex index in {raw!r}", line=pos) from None
        for c in row:
            if not 0 <= c < nv:
                raise ParseError(f"vertex index {c} out of range", line=pos)
        if len(set(row)) != dim + 1:
            raise ParseError(f"element repeats a vertex: {row}", line=pos)
        elems[i] = row

    nb = take("boundary")
    bnd = []
    for _ in range(nb):
        raw = take()
        try:
            b = int(raw)
        except ValueError:
            raise ParseError(f"bad boundary index {raw!r}", line=pos) from None
        if not 0 <= b < nv:
            raise ParseError(f"boundary index {b} out of range", line=pos)
        bnd.append(b)
    return ConformalMesh(pts, elems, bnd)
