"""Simple-polygon kernel: validation, boundary parametrization, affine
boundary images, curve/boundary intersections, and antipodal pairs.

Boundary points are addressed as (edge index, fraction s in [0, 1]); the
scalar parameter edge + s runs over [0, n) counterclockwise.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    CenterOutsideError,
    DegenerateError,
    IndexOutOfRangeError,
    NoIntersectionError,
    NonSimpleError,
    ParseError,
    ZeroScaleError,
)

# Relative tolerances; absolute values scale with the polygon diameter.
EPS_GEOM_REL = 1e-9

INSIDE = "inside"
OUTSIDE = "outside"
BOUNDARY = "boundary"


@dataclass(frozen=True)
class BoundaryPoint2:
    """A point on a polygon boundary: fraction s along directed edge `edge`."""

    edge: int
    s: float

    @property
    def param(self) -> float:
        return self.edge + self.s


class Polygon2:
    """Validated simple polygon with CCW vertex order.

    Build instances through validate_polygon; the constructor only stores
    the array and derived quantities.
    """

    def __init__(self, vertices):
        self.vertices = np.asarray(vertices, dtype=float)
        self.n = len(self.vertices)
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        self.diam = float(np.linalg.norm(hi - lo))

    def edge_arrays(self):
        """(starts, ends) arrays of shape (n, 2)."""
        v = self.vertices
        return v, np.roll(v, -1, axis=0)

    def eps_geom(self, eps=None) -> float:
        return EPS_GEOM_REL * self.diam if eps is None else float(eps)

    def signed_area(self) -> float:
        x, y = self.vertices[:, 0], self.vertices[:, 1]
        x2, y2 = np.roll(x, -1), np.roll(y, -1)
        return 0.5 * float(np.sum(x * y2 - x2 * y))

    def point_at(self, bp: BoundaryPoint2) -> np.ndarray:
        return eval_boundary(self, bp)

    def __repr__(self):
        return f"Polygon2(n={self.n}, diam={self.diam:.6g})"


@dataclass
class ClosedPolyline2:
    """Closed polyline: points[i] -> points[i+1], last wraps to first.

    provenance[i] names the source polygon edge of segment i when the
    polyline is an affine image of a polygon boundary.
    """

    points: np.ndarray
    provenance: np.ndarray

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class PointLocation:
    side: str
    boundary: BoundaryPoint2 | None
    distance: float


@dataclass(frozen=True)
class Hit:
    """One intersection between a polyline segment and a polygon edge."""

    seg: int
    t: float
    edge: int
    u: float
    point: np.ndarray


def validate_polygon(vertices) -> Polygon2:
    """Check simplicity and nondegeneracy; normalize orientation to CCW."""
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
        raise DegenerateError("need at least 3 points of dimension 2")
    if not np.all(np.isfinite(v)):
        raise DegenerateError("non-finite vertex coordinates")
    poly = Polygon2(v)
    scale = max(poly.diam, 1e-300)
    # repeated consecutive vertices collapse an edge
    dif = np.roll(v, -1, axis=0) - v
    if np.any(np.linalg.norm(dif, axis=1) <= 1e-12 * scale):
        raise DegenerateError("repeated consecutive vertices")
    area = poly.signed_area()
    if abs(area) <= 1e-14 * scale * scale:
        raise DegenerateError("zero-area polygon")
    if area < 0.0:
        poly = Polygon2(v[::-1])
    _check_simple(poly)
    return poly


def _check_simple(poly: Polygon2) -> None:
    """Reject any contact between non-adjacent edges (O(n^2) pair scan)."""
    v, w = poly.edge_arrays()
    n = poly.n
    tol = 1e-12 * max(poly.diam, 1e-300)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            hits = _segment_hits(v[i], w[i], v[j], w[j], tol)
            if not hits:
                continue
            if not adjacent:
                raise NonSimpleError(f"edges {i} and {j} touch")
            # adjacent edges may only share their common endpoint
            for t, u, _ in hits:
                if j == i + 1 and (t < 1.0 - 1e-9 or u > 1e-9):
                    raise NonSimpleError(f"edges {i} and {j} overlap")
                if j == n - 1 and i == 0 and (u < 1.0 - 1e-9 or t > 1e-9):
                    raise NonSimpleError(f"edges {j} and {i} overlap")


def eval_boundary(poly: Polygon2, bp: BoundaryPoint2) -> np.ndarray:
    """Point on the boundary at (edge, s)."""
    if not 0 <= bp.edge < poly.n:
        raise IndexOutOfRangeError(f"edge {bp.edge} out of range")
    if not -1e-12 <= bp.s <= 1.0 + 1e-12:
        raise IndexOutOfRangeError(f"s={bp.s} outside [0, 1]")
    s = min(max(bp.s, 0.0), 1.0)
    a = poly.vertices[bp.edge]
    b = poly.vertices[(bp.edge + 1) % poly.n]
    return a + s * (b - a)


def boundary_point_at_param(poly: Polygon2, param: float) -> BoundaryPoint2:
    """Inverse of BoundaryPoint2.param, with wraparound."""
    param = param % poly.n
    edge = int(param)
    if edge == poly.n:  # param == n after fp wrap
        edge = 0
    return BoundaryPoint2(edge, param - edge)


def nearest_boundary_point(poly: Polygon2, q) -> BoundaryPoint2:
    """Closest boundary point; ties pick the smallest edge index, then s."""
    bp, _ = _nearest_with_distance(poly, q)
    return bp


def _nearest_with_distance(poly: Polygon2, q):
    q = np.asarray(q, dtype=float)
    v, w = poly.edge_arrays()
    e = w - v
    ee = np.einsum("ij,ij->i", e, e)
    t = np.einsum("ij,ij->i", q - v, e) / ee
    t = np.clip(t, 0.0, 1.0)
    proj = v + t[:, None] * e
    d2 = np.einsum("ij,ij->i", proj - q, proj - q)
    i = int(np.argmin(d2))  # argmin keeps the first minimum: edge tie-break
    return BoundaryPoint2(i, float(t[i])), float(np.sqrt(d2[i]))


def locate_point(poly: Polygon2, q, eps=None) -> PointLocation:
    """Classify q against the polygon within tolerance eps (default 1e-9*diam)."""
    eps = poly.eps_geom(eps)
    bp, dist = _nearest_with_distance(poly, q)
    if dist <= eps:
        return PointLocation(BOUNDARY, bp, dist)
    side = INSIDE if _parity_inside(poly.vertices, np.asarray(q, float)) else OUTSIDE
    return PointLocation(side, None, dist)


def _parity_inside(vertices: np.ndarray, q: np.ndarray) -> bool:
    """Even-odd ray test; callers must keep q off the boundary."""
    x, y = float(q[0]), float(q[1])
    xs, ys = vertices[:, 0], vertices[:, 1]
    x2, y2 = np.roll(xs, -1), np.roll(ys, -1)
    straddle = (ys > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = xs + (y - ys) * (x2 - xs) / (y2 - ys)
    return bool(np.count_nonzero(straddle & (x < xint)) % 2)


def affine_boundary_image(poly: Polygon2, scale: float, offset) -> ClosedPolyline2:
    """Image of the boundary under x -> scale*x + offset.

    Segment i of the image is the image of polygon edge i, traversed with
    the same fraction parameter, so provenance is the identity map.
    """
    if abs(scale) < 1e-300:
        raise ZeroScaleError("scale must be nonzero")
    offset = np.asarray(offset, dtype=float)
    pts = scale * poly.vertices + offset
    return ClosedPolyline2(points=pts, provenance=np.arange(poly.n))


def _segment_hits(a, b, c, d, tol):
    """Intersections of segment ab with cd.

    Returns a list of (t, u, point) with t along ab and u along cd, both
    clamped to [0, 1]. Proper and touching crossings give one entry;
    collinear overlaps give the two overlap endpoints.
    """
    r = b - a
    s = d - c
    lr = float(np.hypot(*r))
    ls = float(np.hypot(*s))
    if lr < 1e-300 or ls < 1e-300:
        return []
    rxs = r[0] * s[1] - r[1] * s[0]
    qp = c - a
    if abs(rxs) > 1e-12 * lr * ls:
        t = (qp[0] * s[1] - qp[1] * s[0]) / rxs
        u = (qp[0] * r[1] - qp[1] * r[0]) / rxs
        et = tol / lr
        eu = tol / ls
        if -et <= t <= 1.0 + et and -eu <= u <= 1.0 + eu:
            t = min(max(t, 0.0), 1.0)
            u = min(max(u, 0.0), 1.0)
            return [(t, u, a + t * r)]
        return []
    # parallel: either clearly apart or collinear overlap
    h = abs(qp[0] * r[1] - qp[1] * r[0]) / lr
    if h > tol:
        return []
    tc = float(np.dot(qp, r) / (lr * lr))
    td = float(np.dot(d - a, r) / (lr * lr))
    t0 = max(0.0, min(tc, td))
    t1 = min(1.0, max(tc, td))
    et = tol / lr
    if t0 > t1 + et:
        return []
    out = []
    denom = td - tc
    for t in ([t0] if t1 - t0 <= et else [t0, t1]):
        u = (t - tc) / denom if abs(denom) > 1e-300 else 0.0
        u = min(max(u, 0.0), 1.0)
        out.append((t, u, a + t * r))
    return out


def curve_polygon_intersections(curve: ClosedPolyline2, poly: Polygon2, eps=None):
    """All hits between a closed polyline and the polygon boundary.

    Candidate pairs are pruned by bounding-box overlap; the general-position
    crossings solve in one batch and only (near-)parallel pairs fall back to
    the scalar routine. Hits come back sorted by (segment, t, edge, u).
    """
    tol = poly.eps_geom(eps)
    cp = curve.points
    cq = np.roll(cp, -1, axis=0)
    pv, pw = poly.edge_arrays()
    c_lo = np.minimum(cp, cq) - tol
    c_hi = np.maximum(cp, cq) + tol
    p_lo = np.minimum(pv, pw)
    p_hi = np.maximum(pv, pw)
    overlap = ((c_lo[:, None, 0] <= p_hi[None, :, 0])
               & (c_hi[:, None, 0] >= p_lo[None, :, 0])
               & (c_lo[:, None, 1] <= p_hi[None, :, 1])
               & (c_hi[:, None, 1] >= p_lo[None, :, 1]))
    I, J = np.nonzero(overlap)
    hits = []
    if len(I):
        a = cp[I]
        r = cq[I] - a
        c = pv[J]
        s = pw[J] - c
        lr = np.hypot(r[:, 0], r[:, 1])
        ls = np.hypot(s[:, 0], s[:, 1])
        ok = (lr >= 1e-300) & (ls >= 1e-300)
        rxs = r[:, 0] * s[:, 1] - r[:, 1] * s[:, 0]
        qp = c - a
        general = ok & (np.abs(rxs) > 1e-12 * lr * ls)
        den = np.where(general, rxs, 1.0)
        t = (qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]) / den
        u = (qp[:, 0] * r[:, 1] - qp[:, 1] * r[:, 0]) / den
        et = tol / np.where(ok, lr, 1.0)
        eu = tol / np.where(ok, ls, 1.0)
        good = general & (t >= -et) & (t <= 1.0 + et) \
            & (u >= -eu) & (u <= 1.0 + eu)
        for idx in np.nonzero(good)[0]:
            tt = min(max(float(t[idx]), 0.0), 1.0)
            uu = min(max(float(u[idx]), 0.0), 1.0)
            hits.append(Hit(int(I[idx]), tt, int(J[idx]), uu,
                            a[idx] + tt * r[idx]))
        for idx in np.nonzero(ok & ~general)[0]:
            i, j = int(I[idx]), int(J[idx])
            for tt, uu, point in _segment_hits(cp[i], cq[i], pv[j], pw[j], tol):
                hits.append(Hit(i, tt, j, uu, point))
    hits.sort(key=lambda h: (h.seg, h.t, h.edge, h.u))
    return hits


def first_hit_from(curve: ClosedPolyline2, poly: Polygon2, start_param: float, eps=None):
    """First boundary hit at or after start_param along the curve (CCW).

    Traversal offset is measured in edge units modulo n; offsets within
    1e-7 of a full loop are folded to zero so a start point sitting on the
    boundary is accepted immediately.
    """
    hits = curve_polygon_intersections(curve, poly, eps)
    if not hits:
        raise NoIntersectionError("curve does not meet the boundary")
    n = curve.n
    best = None
    for h in hits:
        off = (h.seg + h.t - start_param) % n
        if off > n - 1e-7:
            off = 0.0
        key = (off, h.seg, h.t, h.edge, h.u)
        if best is None or key < best[0]:
            best = (key, h)
    return best[1]


def antipodal_about(poly: Polygon2, c, eps=None):
    """Boundary pair (q, q') with midpoint c.

    q starts at the boundary point nearest c; its companion 2c - q then
    sits inside the polygon, and q slides CCW until the reflected copy of
    the boundary meets the boundary again. Returns (q, q') with q' = 2c - q.
    """
    c = np.asarray(c, dtype=float)
    eps_v = poly.eps_geom(eps)
    loc = locate_point(poly, c, eps_v)
    if loc.side == OUTSIDE:
        raise CenterOutsideError("center lies outside the polygon")
    bp0 = loc.boundary if loc.boundary is not None else nearest_boundary_point(poly, c)
    p0 = eval_boundary(poly, bp0)
    comp = 2.0 * c - p0
    bpc, dist = _nearest_with_distance(poly, comp)
    if dist <= eps_v:
        return bp0, bpc
    image = affine_boundary_image(poly, -1.0, 2.0 * c)
    hit = first_hit_from(image, poly, bp0.param, eps_v)
    return BoundaryPoint2(hit.seg, hit.t), BoundaryPoint2(hit.edge, hit.u)


# --- file formats -----------------------------------------------------------

def parse_polygon_text(text: str) -> Polygon2:
    """Polygon from `x y` lines (# comments) or a JSON {"vertices": [...]}."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
            verts = data["vertices"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"bad polygon JSON: {exc}") from exc
    else:
        verts = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected `x y`")
            try:
                verts.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ParseError(f"line {lineno}: {exc}") from exc
    try:
        return validate_polygon(verts)
    except (DegenerateError, NonSimpleError):
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad polygon data: {exc}") from exc


def load_polygon(path) -> Polygon2:
    with open(path, "r", encoding="utf-8") as f:
        return parse_polygon_text(f.read())


def dump_polygon_text(poly: Polygon2) -> str:
    lines = [f"{float(x)!r} {float(y)!r}" for x, y in poly.vertices]
    return "\n".join(lines) + "\n"
