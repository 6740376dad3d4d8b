"""Closed oriented polyhedral surfaces: OFF files, point classification,
surface paths, perpendicular frame fields, and planar cross-sections.

Faces are vertex-index loops, CCW seen from outside. Everything metric runs
on the fan/ear triangulation; face ids always refer to the original loops.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BadFrameError,
    DegenerateSectionError,
    DisconnectedError,
    InputError,
    NoLoopContainsOriginError,
    NonPlanarFaceError,
    OpenSurfaceError,
    OriginOnBoundaryError,
    OriginOutsideError,
    ParseError,
    PoiseError,
    SubdivisionLimitError,
)
from .geom2d import (
    BOUNDARY,
    INSIDE,
    OUTSIDE,
    Polygon2,
    _parity_inside,
    locate_point,
    validate_polygon,
)

EPS_GEOM_REL = 1e-9

# ray directions for parity tests: fixed, irrational-ish, in retry order
_RAY_DIRS = np.array([
    [0.57735026918962576, 0.30028310963471227, 0.76095228569524860],
    [0.27261862555534123, 0.89442719099991588, -0.35355339059327373],
    [-0.80178372573727319, 0.26726124191242440, 0.53452248382484879],
    [0.12309149097933272, -0.49236596391733095, 0.86164043685532309],
    [0.90453403373329089, -0.30151134457776363, 0.30151134457776363],
    [-0.18257418583505536, 0.36514837167011072, -0.91287092917527679],
    [0.70710678118654752, 0.40824829046386302, 0.57735026918962576],
    [-0.50709255283710986, -0.84515425472851657, 0.16903085094570331],
    [0.32444284226152509, 0.48666426339228763, 0.81110710565381272],
    [-0.59628479399994383, 0.29814239699997192, 0.74535599249992989],
    [0.45584231742130190, -0.56980289677662737, -0.68376347613195285],
    [0.87287156094396952, 0.21821789023599239, -0.43643578047198478],
    [-0.09853292781642932, 0.78826342253143455, 0.60746638485796746],
    [0.64699664397735786, -0.64699664397735786, 0.40437290248584866],
    [-0.36650833485098543, -0.54976250227647814, 0.75063374815267762],
    [0.21693045781865616, 0.65079137345596849, -0.72762820614740413],
])
_RAY_DIRS /= np.linalg.norm(_RAY_DIRS, axis=1)[:, None]


@dataclass(frozen=True)
class SurfacePoint3:
    """Point on a face: barycentric coordinates in triangle `tri` of `face`."""

    face: int
    tri: int
    bary: tuple


@dataclass(frozen=True)
class Plane3:
    normal: tuple
    offset: float = 0.0

    def unit_normal(self) -> np.ndarray:
        n = np.asarray(self.normal, dtype=float)
        norm = np.linalg.norm(n)
        if norm < 1e-300:
            raise InputError("zero plane normal")
        return n / norm


class Polyhedron3:
    """Validated closed oriented surface; build via validate_polyhedron/load_off."""

    def __init__(self, vertices, faces, tris, tri_face):
        self.vertices = np.asarray(vertices, dtype=float)
        self.faces = [list(map(int, f)) for f in faces]
        self.tris = np.asarray(tris, dtype=int)
        self.tri_face = np.asarray(tri_face, dtype=int)
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        self.diam = float(np.linalg.norm(hi - lo))
        # per-face list of global triangle ids, in fan order
        self.face_tris = [[] for _ in self.faces]
        for t, f in enumerate(self.tri_face):
            self.face_tris[f].append(t)
        v0 = self.vertices[self.tris[:, 0]]
        v1 = self.vertices[self.tris[:, 1]]
        v2 = self.vertices[self.tris[:, 2]]
        self._tv0 = v0
        self._ab = v1 - v0
        self._ac = v2 - v0
        self._tn = np.cross(self._ab, self._ac)

    def eps_geom(self, eps=None) -> float:
        return EPS_GEOM_REL * self.diam if eps is None else float(eps)

    def volume(self) -> float:
        return float(np.einsum("ij,ij->i", self._tv0, self._tn).sum()) / 6.0

    # --- batched metric queries ------------------------------------------

    def closest_points(self, points):
        """Per point: (distance, global tri index, closest point on surface)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        m = len(pts)
        best_d2 = np.full(m, np.inf)
        best_tri = np.zeros(m, dtype=int)
        best_cp = np.zeros((m, 3))
        chunk = max(1, 4_000_000 // max(len(self.tris), 1))
        for lo in range(0, m, chunk):
            p = pts[lo:lo + chunk]
            cp = _closest_on_triangles(p, self._tv0, self._ab, self._ac)
            d2 = np.einsum("mtj,mtj->mt", cp - p[:, None, :], cp - p[:, None, :])
            ti = np.argmin(d2, axis=1)
            rows = np.arange(len(p))
            best_d2[lo:lo + chunk] = d2[rows, ti]
            best_tri[lo:lo + chunk] = ti
            best_cp[lo:lo + chunk] = cp[rows, ti]
        return np.sqrt(best_d2), best_tri, best_cp

    def contains(self, points):
        """Parity test per point; callers keep points off the surface."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(len(pts), dtype=bool)
        todo = np.arange(len(pts))
        for d in _RAY_DIRS:
            if len(todo) == 0:
                break
            cnt, bad = self._ray_hits(pts[todo], d)
            ok = ~bad
            out[todo[ok]] = (cnt[ok] % 2) == 1
            todo = todo[bad]
        if len(todo):
            raise PoiseError("parity ray casting failed for some points")
        return out

    def _ray_hits(self, pts, d):
        """Crossing counts along direction d plus degeneracy flags."""
        m = len(pts)
        eps_b = 1e-9
        eps_t = 1e-9 * max(self.diam, 1.0)
        h = np.cross(d, self._ac)
        a = np.einsum("tj,tj->t", self._ab, h)
        nn = np.linalg.norm(self._tn, axis=1)
        para = np.abs(a) <= 1e-12 * np.maximum(nn, 1e-300)
        live = ~para
        counts = np.zeros(m, dtype=int)
        bad = np.zeros(m, dtype=bool)
        chunk = max(1, 2_000_000 // max(len(self.tris), 1))
        f = np.zeros_like(a)
        f[live] = 1.0 / a[live]
        for lo in range(0, m, chunk):
            p = pts[lo:lo + chunk]
            s = p[:, None, :] - self._tv0[None, :, :]
            u = np.einsum("mtj,tj->mt", s, h) * f
            q = np.cross(s, self._ab[None, :, :])
            v = np.einsum("mtj,j->mt", q, d) * f
            t = np.einsum("mtj,tj->mt", q, self._ac) * f
            good = (u > eps_b) & (v > eps_b) & (u + v < 1.0 - eps_b) & (t > eps_t)
            loose = (u > -eps_b) & (v > -eps_b) & (u + v < 1.0 + eps_b) & (t > -eps_t)
            good &= live[None, :]
            loose &= live[None, :]
            counts[lo:lo + chunk] = good.sum(axis=1)
            bad[lo:lo + chunk] = (loose & ~good).any(axis=1)
            if para.any():
                # a ray inside the plane of a parallel triangle breaks parity
                dp = np.abs(np.einsum("mtj,tj->mt", s[:, para, :], self._tn[para]))
                bad[lo:lo + chunk] |= (dp <= eps_t * np.maximum(nn[para], 1e-300)).any(axis=1)
        return counts, bad

    def signed_distances(self, points, eps=None):
        """Negative inside, positive outside, exactly 0 on the eps shell."""
        eps = self.eps_geom(eps)
        dist, _, _ = self.closest_points(points)
        out = dist.copy()
        shell = dist <= eps
        out[shell] = 0.0
        off = ~shell
        if off.any():
            pts = np.atleast_2d(np.asarray(points, dtype=float))
            inside = self.contains(pts[off])
            sign = np.where(inside, -1.0, 1.0)
            out[off] = dist[off] * sign
        return out

    def __repr__(self):
        return (f"Polyhedron3(V={len(self.vertices)}, F={len(self.faces)}, "
                f"T={len(self.tris)})")


def _closest_on_triangles(p, v0, ab, ac):
    """Closest points on each triangle for each query point (Ericson)."""
    ap = p[:, None, :] - v0[None, :, :]
    d1 = np.einsum("mtj,tj->mt", ap, ab)
    d2 = np.einsum("mtj,tj->mt", ap, ac)
    bp = ap - ab[None, :, :]
    d3 = np.einsum("mtj,tj->mt", bp, ab)
    d4 = np.einsum("mtj,tj->mt", bp, ac)
    cp_ = ap - ac[None, :, :]
    d5 = np.einsum("mtj,tj->mt", cp_, ab)
    d6 = np.einsum("mtj,tj->mt", cp_, ac)

    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    with np.errstate(divide="ignore", invalid="ignore"):
        t_ab = np.where(d1 - d3 != 0.0, d1 / (d1 - d3), 0.0)
        t_ac = np.where(d2 - d6 != 0.0, d2 / (d2 - d6), 0.0)
        den_bc = (d4 - d3) + (d5 - d6)
        t_bc = np.where(den_bc != 0.0, (d4 - d3) / den_bc, 0.0)
        den = va + vb + vc
        v_in = np.where(den != 0.0, vb / den, 0.0)
        w_in = np.where(den != 0.0, vc / den, 0.0)

    # interior projection as the default, then overwrite region by region
    cp = v0[None] + v_in[..., None] * ab[None] + w_in[..., None] * ac[None]
    m_bc = (va <= 0.0) & (d4 - d3 >= 0.0) & (d5 - d6 >= 0.0)
    alt = (v0 + ab)[None] + t_bc[..., None] * (ac - ab)[None]
    cp = np.where(m_bc[..., None], alt, cp)
    m_ac = (vb <= 0.0) & (d2 >= 0.0) & (d6 <= 0.0)
    alt = v0[None] + t_ac[..., None] * ac[None]
    cp = np.where(m_ac[..., None], alt, cp)
    m_ab = (vc <= 0.0) & (d1 >= 0.0) & (d3 <= 0.0)
    alt = v0[None] + t_ab[..., None] * ab[None]
    cp = np.where(m_ab[..., None], alt, cp)
    m_c = (d6 >= 0.0) & (d5 <= d6)
    cp = np.where(m_c[..., None], (v0 + ac)[None], cp)
    m_b = (d3 >= 0.0) & (d4 <= d3)
    cp = np.where(m_b[..., None], (v0 + ab)[None], cp)
    m_a = (d1 <= 0.0) & (d2 <= 0.0)
    cp = np.where(m_a[..., None], v0[None], cp)
    return cp


# --- construction and IO -----------------------------------------------------

def validate_polyhedron(vertices, faces) -> Polyhedron3:
    """Check closedness, orientation, planarity; normalize outward; triangulate."""
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2 or verts.shape[1] != 3 or len(verts) < 4:
        raise InputError("need at least 4 vertices of dimension 3")
    if not np.all(np.isfinite(verts)):
        raise InputError("non-finite vertex coordinates")
    faces = [list(map(int, f)) for f in faces]
    nv = len(verts)
    for f in faces:
        if len(f) < 3 or len(set(f)) != len(f):
            raise InputError(f"bad face loop {f}")
        if any(i < 0 or i >= nv for i in f):
            raise InputError(f"face index out of range in {f}")
    _check_closed(faces)
    diam = float(np.linalg.norm(verts.max(axis=0) - verts.min(axis=0)))
    tris, tri_face = _triangulate(verts, faces, diam)
    poly = Polyhedron3(verts, faces, tris, tri_face)
    if poly.volume() < 0.0:
        faces = [f[::-1] for f in faces]
        tris, tri_face = _triangulate(verts, faces, diam)
        poly = Polyhedron3(verts, faces, tris, tri_face)
    return poly


def _check_closed(faces) -> None:
    seen = set()
    for f in faces:
        for a, b in zip(f, f[1:] + f[:1]):
            if (a, b) in seen:
                raise OpenSurfaceError(f"directed edge ({a},{b}) repeated")
            seen.add((a, b))
    for a, b in seen:
        if (b, a) not in seen:
            raise OpenSurfaceError(f"directed edge ({b},{a}) missing")


def _face_frame(verts, f, diam):
    """Newell normal + centroid; raises if the loop is not planar."""
    pts = verts[f]
    nrm = np.zeros(3)
    for i in range(len(f)):
        a, b = pts[i], pts[(i + 1) % len(f)]
        nrm += np.cross(a, b)
    norm = np.linalg.norm(nrm)
    if norm <= 1e-14 * max(diam, 1.0) ** 2:
        raise NonPlanarFaceError(f"face {f} has no usable normal")
    nrm = nrm / norm
    centroid = pts.mean(axis=0)
    off = np.abs((pts - centroid) @ nrm)
    if off.max() > 1e-8 * max(diam, 1.0):
        raise NonPlanarFaceError(f"face {f} is not planar")
    return nrm, centroid


def _triangulate(verts, faces, diam):
    tris = []
    tri_face = []
    for fid, f in enumerate(faces):
        if len(f) == 3:
            tris.append(f)
            tri_face.append(fid)
            continue
        nrm, centroid = _face_frame(verts, f, diam)
        for tri in _ear_clip(verts, f, nrm, centroid):
            tris.append(tri)
            tri_face.append(fid)
    return np.array(tris, dtype=int), np.array(tri_face, dtype=int)


def _ear_clip(verts, loop, nrm, centroid):
    """Triangulate a simple planar loop (fan for convex faces falls out)."""
    u = _any_perp(nrm)
    w = np.cross(nrm, u)
    pts2 = {i: np.array([(verts[i] - centroid) @ u, (verts[i] - centroid) @ w])
            for i in loop}
    idx = list(loop)
    area2 = sum(_cross2(pts2[idx[i]], pts2[idx[(i + 1) % len(idx)]])
                for i in range(len(idx)))
    if area2 < 0.0:
        idx.reverse()
        flipped = True
    else:
        flipped = False
    out = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 10000:
            raise NonPlanarFaceError("ear clipping failed (non-simple face?)")
        n = len(idx)
        clipped = False
        for i in range(n):
            a, b, c = pts2[idx[i - 1]], pts2[idx[i]], pts2[idx[(i + 1) % n]]
            if _cross2(b - a, c - b) <= 0.0:
                continue  # reflex corner
            ear = True
            for j in range(n):
                if j in (i - 1, i, (i + 1) % n) or (i == 0 and j == n - 1):
                    continue
                if _in_triangle2(pts2[idx[j]], a, b, c):
                    ear = False
                    break
            if ear:
                tri = [idx[i - 1], idx[i], idx[(i + 1) % n]]
                out.append(tri[::-1] if flipped else tri)
                del idx[i]
                clipped = True
                break
        if not clipped:
            raise NonPlanarFaceError("ear clipping failed (degenerate face?)")
    tri = list(idx)
    out.append(tri[::-1] if flipped else tri)
    return out


def _cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def _in_triangle2(p, a, b, c) -> bool:
    d1 = _cross2(b - a, p - a)
    d2 = _cross2(c - b, p - b)
    d3 = _cross2(a - c, p - c)
    return min(d1, d2, d3) >= 0.0


def _any_perp(n):
    j = int(np.argmin(np.abs(n)))
    e = np.zeros(3)
    e[j] = 1.0
    u = np.cross(n, e)
    return u / np.linalg.norm(u)


def parse_off(text: str) -> Polyhedron3:
    """ASCII OFF; comments and blank lines allowed, colors ignored."""
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.extend(line.split())
    pos = 0
    if pos < len(tokens) and tokens[pos].upper() == "OFF":
        pos += 1
    try:
        nv, nf = int(tokens[pos]), int(tokens[pos + 1])
        pos += 3  # counts line also carries the (ignored) edge count
        verts = []
        for _ in range(nv):
            verts.append([float(tokens[pos]), float(tokens[pos + 1]),
                          float(tokens[pos + 2])])
            pos += 3
        faces = []
        for _ in range(nf):
            k = int(tokens[pos])
            pos += 1
            if k < 3:
                raise ParseError(f"face with {k} vertices")
            faces.append([int(t) for t in tokens[pos:pos + k]])
            pos += k
    except (IndexError, ValueError) as exc:
        raise ParseError(f"bad OFF data: {exc}") from exc
    return validate_polyhedron(verts, faces)


def load_off(path) -> Polyhedron3:
    with open(path, "r", encoding="utf-8") as f:
        return parse_off(f.read())


def dump_off(poly: Polyhedron3) -> str:
    lines = ["OFF", f"{len(poly.vertices)} {len(poly.faces)} 0"]
    for v in poly.vertices:
        # repr of a Python float round-trips exactly
        lines.append(" ".join(repr(float(x)) for x in v))
    for f in poly.faces:
        lines.append(" ".join([str(len(f))] + [str(i) for i in f]))
    return "\n".join(lines) + "\n"


# --- point classification -----------------------------------------------------

@dataclass(frozen=True)
class PointLocation3:
    side: str
    surface: SurfacePoint3 | None
    distance: float


def eval_surface(poly: Polyhedron3, sp: SurfacePoint3) -> np.ndarray:
    tri = poly.tris[poly.face_tris[sp.face][sp.tri]]
    b = np.asarray(sp.bary, dtype=float)
    return b @ poly.vertices[tri]


def _surface_point_from_tri(poly: Polyhedron3, tri_id: int, point) -> SurfacePoint3:
    fid = int(poly.tri_face[tri_id])
    local = poly.face_tris[fid].index(tri_id)
    a, b, c = poly.vertices[poly.tris[tri_id]]
    ab, ac, ap = b - a, c - a, np.asarray(point, float) - a
    d00, d01, d11 = ab @ ab, ab @ ac, ac @ ac
    d20, d21 = ap @ ab, ap @ ac
    den = d00 * d11 - d01 * d01
    if abs(den) < 1e-300:
        bary = (1.0, 0.0, 0.0)
    else:
        v = (d11 * d20 - d01 * d21) / den
        w = (d00 * d21 - d01 * d20) / den
        v = min(max(v, 0.0), 1.0)
        w = min(max(w, 0.0), 1.0 - v)
        bary = (1.0 - v - w, v, w)
    return SurfacePoint3(fid, local, bary)


def side3(poly: Polyhedron3, point, eps=None) -> PointLocation3:
    """Inside/outside/on-boundary within eps (default 1e-9*diam)."""
    eps = poly.eps_geom(eps)
    dist, tri, cp = poly.closest_points([point])
    d = float(dist[0])
    if d <= eps:
        return PointLocation3(BOUNDARY, _surface_point_from_tri(poly, int(tri[0]), cp[0]), d)
    inside = bool(poly.contains([point])[0])
    return PointLocation3(INSIDE if inside else OUTSIDE, None, d)


def signed_distance(poly: Polyhedron3, point, eps=None) -> float:
    return float(poly.signed_distances([point], eps)[0])


def extreme_boundary_points(poly: Polyhedron3):
    """(nearest surface point to origin, farthest vertex); origin must be interior."""
    loc = side3(poly, (0.0, 0.0, 0.0))
    if loc.side == BOUNDARY:
        raise OriginOnBoundaryError("origin lies on the surface")
    if loc.side == OUTSIDE:
        raise OriginOutsideError("origin lies outside the surface")
    dist, tri, cp = poly.closest_points([(0.0, 0.0, 0.0)])
    near = _surface_point_from_tri(poly, int(tri[0]), cp[0])
    norms = np.linalg.norm(poly.vertices, axis=1)
    vid = int(np.argmax(norms))  # ties: smallest vertex id
    far = None
    for t, tri_v in enumerate(poly.tris):
        if vid in tri_v:
            corner = list(tri_v).index(vid)
            bary = [0.0, 0.0, 0.0]
            bary[corner] = 1.0
            fid = int(poly.tri_face[t])
            far = SurfacePoint3(fid, poly.face_tris[fid].index(t), tuple(bary))
            break
    return near, far


# --- surface paths and frames --------------------------------------------------

class SurfacePath:
    """Piecewise-linear path on the surface, parametrized by arclength in [0,1]."""

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        keep = [pts[0]]
        for p in pts[1:]:
            if np.linalg.norm(p - keep[-1]) > 1e-300:
                keep.append(p)
        self.points = np.array(keep)
        if len(self.points) < 2:
            raise InputError("path endpoints coincide")
        seg = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        self.length = float(cum[-1])
        self.params = cum / self.length

    def eval(self, t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
        i = np.clip(np.searchsorted(self.params, t, side="right") - 1, 0,
                    len(self.points) - 2)
        t0 = self.params[i]
        t1 = self.params[i + 1]
        frac = np.where(t1 > t0, (t - t0) / (t1 - t0), 0.0)
        return self.points[i] + frac[..., None] * (self.points[i + 1] - self.points[i])


def surface_path(poly: Polyhedron3, sp0: SurfacePoint3, sp1: SurfacePoint3) -> SurfacePath:
    """Dijkstra along triangulation edges, endpoints tied in through their triangles."""
    import heapq

    x0 = eval_surface(poly, sp0)
    x1 = eval_surface(poly, sp1)
    if np.linalg.norm(x0 - x1) <= 1e-12 * max(poly.diam, 1.0):
        raise InputError("path endpoints coincide")

    adj = {}
    for tri in poly.tris:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            adj.setdefault(int(a), set()).add(int(b))
            adj.setdefault(int(b), set()).add(int(a))
    adj = {k: sorted(v) for k, v in adj.items()}

    def anchor(sp, x):
        tri = poly.tris[poly.face_tris[sp.face][sp.tri]]
        ds = [np.linalg.norm(poly.vertices[i] - x) for i in tri]
        return int(tri[int(np.argmin(ds))])

    va, vb = anchor(sp0, x0), anchor(sp1, x1)
    dist = {va: 0.0}
    prev = {}
    heap = [(0.0, va)]
    seen = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in seen:
            continue
        seen.add(u)
        if u == vb:
            break
        for w in adj.get(u, []):
            nd = d + float(np.linalg.norm(poly.vertices[u] - poly.vertices[w]))
            if w not in dist or nd < dist[w] - 1e-300:
                dist[w] = nd
                prev[w] = u
                heapq.heappush(heap, (nd, w))
    if vb not in seen:
        raise DisconnectedError("surface path endpoints are not connected")
    chain = [vb]
    while chain[-1] != va:
        chain.append(prev[chain[-1]])
    chain.reverse()
    pts = [x0] + [poly.vertices[i] for i in chain] + [x1]
    return SurfacePath(pts)


class FrameField:
    """Unit field v(t) perpendicular to gamma(t) along a surface path."""

    def __init__(self, ts, qs, vs):
        self.ts = np.asarray(ts, dtype=float)
        self.qs = np.asarray(qs, dtype=float)
        self.vs = np.asarray(vs, dtype=float)

    def eval(self, t):
        t = np.clip(np.asarray(t, dtype=float), self.ts[0], self.ts[-1])
        i = np.clip(np.searchsorted(self.ts, t, side="right") - 1, 0, len(self.ts) - 2)
        t0, t1 = self.ts[i], self.ts[i + 1]
        frac = np.where(t1 > t0, (t - t0) / (t1 - t0), 0.0)[..., None]
        q = self.qs[i] + frac * (self.qs[i + 1] - self.qs[i])
        w = self.vs[i] + frac * (self.vs[i + 1] - self.vs[i])
        qn = q / np.linalg.norm(q, axis=-1, keepdims=True)
        proj = w - np.einsum("...j,...j->...", w, qn)[..., None] * qn
        return proj / np.linalg.norm(proj, axis=-1, keepdims=True)


def _init_frame_vector(q):
    nq = np.linalg.norm(q)
    if nq < 1e-300:
        raise BadFrameError("cannot frame the zero vector")
    j = int(np.argmin(np.abs(q / nq)))
    e = np.zeros(3)
    e[j] = 1.0
    v = np.cross(q, e)
    return v / np.linalg.norm(v)


def _segment_ok(q0, q1, v0, v1, depth=8):
    """Projection norm stays >= 0.5 at all dyadic samples of the segment."""
    frac = np.linspace(0.0, 1.0, 2**depth + 1)[:, None]
    q = q0 + frac * (q1 - q0)
    w = v0 + frac * (v1 - v0)
    qn = q / np.linalg.norm(q, axis=1, keepdims=True)
    proj = w - np.einsum("ij,ij->i", w, qn)[:, None] * qn
    return bool(np.linalg.norm(proj, axis=1).min() >= 0.5)


def frame_field(path: SurfacePath) -> FrameField:
    """Breakpoint frames from the least-aligned-axis rule, then midpoint
    subdivision until interpolate-project stays well-conditioned."""
    ts = list(path.params)
    qs = [path.points[i] for i in range(len(ts))]
    vs = [_init_frame_vector(q) for q in qs]

    out_t, out_q, out_v = [ts[0]], [qs[0]], [vs[0]]
    stack = [(ts[i], qs[i], vs[i], ts[i + 1], qs[i + 1], vs[i + 1], 0)
             for i in range(len(ts) - 1)][::-1]
    while stack:
        t0, q0, v0, t1, q1, v1, level = stack.pop()
        if _segment_ok(q0, q1, v0, v1):
            out_t.append(t1)
            out_q.append(q1)
            out_v.append(v1)
            continue
        if level >= 12:
            raise SubdivisionLimitError("frame subdivision exceeded 12 levels")
        tm = 0.5 * (t0 + t1)
        qm = 0.5 * (q0 + q1)
        wm = 0.5 * (v0 + v1)
        qn = qm / np.linalg.norm(qm)
        proj = wm - (wm @ qn) * qn
        norm = np.linalg.norm(proj)
        if norm < 1e-12:
            raise SubdivisionLimitError("frame interpolation collapsed")
        vm = proj / norm
        stack.append((tm, qm, vm, t1, q1, v1, level + 1))
        stack.append((t0, q0, v0, tm, qm, vm, level + 1))
    return FrameField(out_t, out_q, out_v)


# --- planar cross-sections ------------------------------------------------------

class CrossSection:
    """Section loop around the plane anchor, as a 2D polygon plus embedding."""

    def __init__(self, polygon: Polygon2, anchor, u, w, edge_faces):
        self.polygon = polygon
        self.anchor = np.asarray(anchor, dtype=float)
        self.u = np.asarray(u, dtype=float)
        self.w = np.asarray(w, dtype=float)
        self.edge_faces = np.asarray(edge_faces, dtype=int)

    def to3d(self, pt2):
        pt2 = np.asarray(pt2, dtype=float)
        return self.anchor + pt2[..., 0, None] * self.u + pt2[..., 1, None] * self.w

    def to2d(self, pt3):
        rel = np.asarray(pt3, dtype=float) - self.anchor
        return np.stack([rel @ self.u, rel @ self.w], axis=-1)


def _face_polygon2(poly, fid, nrm, centroid):
    u = _any_perp(nrm)
    w = np.cross(nrm, u)
    pts = poly.vertices[poly.faces[fid]]
    rel = pts - centroid
    return np.stack([rel @ u, rel @ w], axis=1)


def cross_section(poly: Polyhedron3, plane: Plane3) -> CrossSection:
    """Slice the surface; return the loop whose interior holds the anchor.

    Face by face: boundary crossings and on-plane vertices become section
    points, consecutive pairs along the section line are kept when their
    midpoint lies in the face, chords are stitched into loops.
    """
    n = plane.unit_normal()
    anchor = n * plane.offset
    tol = poly.eps_geom() * 1e3  # slicing tolerance, still tiny vs diam
    d = poly.vertices @ n - plane.offset
    on = np.abs(d) <= tol

    chords = []
    for fid, f in enumerate(poly.faces):
        pts = []
        for i, a in enumerate(f):
            b = f[(i + 1) % len(f)]
            if on[a]:
                pts.append(poly.vertices[a])
            elif not on[b] and d[a] * d[b] < 0.0:
                frac = d[a] / (d[a] - d[b])
                pts.append(poly.vertices[a] + frac * (poly.vertices[b] - poly.vertices[a]))
        if not pts:
            continue
        uniq = []
        for p in pts:
            if all(np.linalg.norm(p - q) > tol for q in uniq):
                uniq.append(p)
        if len(uniq) < 2:
            continue
        fn, fc = _face_frame(poly.vertices, f, poly.diam)
        line = np.cross(n, fn)
        ll = np.linalg.norm(line)
        if ll <= 1e-9:
            raise DegenerateSectionError(f"face {fid} lies in the cutting plane")
        line = line / ll
        uniq.sort(key=lambda p: float(p @ line))
        face2 = _face_polygon2(poly, fid, fn, fc)
        u2 = _any_perp(fn)
        w2 = np.cross(fn, u2)
        for p0, p1 in zip(uniq, uniq[1:]):
            mid = 0.5 * (p0 + p1)
            rel = mid - fc
            m2 = np.array([rel @ u2, rel @ w2])
            if _point_in_loop2(face2, m2, tol):
                chords.append((p0, p1, fid))

    if not chords:
        if on.any():
            raise DegenerateSectionError("plane only grazes vertices or edges")
        raise NoLoopContainsOriginError("plane misses the surface")

    loops = _stitch_loops(chords, tol)
    u = _any_perp(n)
    w = np.cross(n, u)
    for pts3, fids in loops:
        rel = np.asarray(pts3) - anchor
        pts2 = np.stack([rel @ u, rel @ w], axis=1)
        try:
            polygon, fids = _remap_loop(pts2, list(fids))
        except (InputError, PoiseError):
            continue  # sliver loop below validation tolerances
        if locate_point(polygon, (0.0, 0.0)).side != OUTSIDE:
            return CrossSection(polygon, anchor, u, w, fids)
    raise NoLoopContainsOriginError("no section loop encloses the anchor")


def _loop_area(pts2):
    x, y = pts2[:, 0], pts2[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _remap_loop(pts2, fids):
    """Validate the loop; if validation reversed it, reverse edge provenance."""
    polygon = validate_polygon(pts2)
    if _loop_area(pts2) < 0.0:
        m = len(fids)
        fids = [fids[(m - 2 - j) % m] for j in range(m)]
    return polygon, np.asarray(fids, dtype=int)


def _point_in_loop2(loop2, p2, tol) -> bool:
    """Closed containment: inside by parity, or within tol of the boundary."""
    m = len(loop2)
    a = loop2
    b = np.roll(loop2, -1, axis=0)
    e = b - a
    ee = np.einsum("ij,ij->i", e, e)
    t = np.clip(np.einsum("ij,ij->i", p2 - a, e) / np.maximum(ee, 1e-300), 0.0, 1.0)
    proj = a + t[:, None] * e
    dmin = float(np.sqrt(np.einsum("ij,ij->i", proj - p2, proj - p2).min()))
    if dmin <= tol:
        return True
    return _parity_inside(np.asarray(loop2), np.asarray(p2))


def _stitch_loops(chords, tol):
    """Chain chords end to end into closed loops (greedy endpoint matching)."""
    # drop duplicate chords (same endpoints), keep the smallest face id
    uniq = []
    for p0, p1, fid in chords:
        dup = False
        for q0, q1, _ in uniq:
            if ((np.linalg.norm(p0 - q0) <= tol and np.linalg.norm(p1 - q1) <= tol)
                    or (np.linalg.norm(p0 - q1) <= tol and np.linalg.norm(p1 - q0) <= tol)):
                dup = True
                break
        if not dup:
            uniq.append((p0, p1, fid))
    used = [False] * len(uniq)
    loops = []
    for start in range(len(uniq)):
        if used[start]:
            continue
        p0, p1, fid = uniq[start]
        used[start] = True
        pts = [p0, p1]
        fids = [fid]
        while True:
            if np.linalg.norm(pts[-1] - pts[0]) <= tol:
                pts.pop()
                if len(pts) >= 3:
                    loops.append((pts, fids))
                break
            found = False
            for j in range(len(uniq)):
                if used[j]:
                    continue
                q0, q1, fj = uniq[j]
                if np.linalg.norm(q0 - pts[-1]) <= tol:
                    used[j] = True
                    pts.append(q1)
                    fids.append(fj)
                    found = True
                    break
                if np.linalg.norm(q1 - pts[-1]) <= tol:
                    used[j] = True
                    pts.append(q0)
                    fids.append(fj)
                    found = True
                    break
            if not found:
                raise DegenerateSectionError("section chords do not close up")
    if not loops:
        raise DegenerateSectionError("section has no closed loop")
    return loops
