"""Balanced point placements on polytope skeletons.

Builds on the halfspace kernel: a halving witness (a boundary point x with
x and -x on low-dimensional faces), recursive placements of 2^k points or
d points on the 1-skeleton with barycenter at the target, an exhaustive
edge-triple solver in 3D, a four-point construction on triangulated
surfaces, and product fixtures whose low skeletons avoid the reflected
body entirely.
"""

from dataclasses import dataclass

from itertools import combinations_with_replacement
import math

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import QhullError

from .balance2d import balance_iterative
from .errors import (
    InputError,
    NotFoundError,
    PerturbationFailedError,
    UnsupportedDimensionError,
    WalkFailedError,
)
from .geom2d import antipodal_about, eval_boundary, validate_polygon
from .geom3d import Plane3, Polyhedron3, _any_perp, _face_frame, cross_section
from .polytoped import (
    FROM_P,
    FaceD,
    HPolytope,
    enumerate_vertices,
    faces_of_dim,
    hpolytope,
    intersect,
    perturb,
    product,
    reflect,
)

PERTURB_MAGNITUDES = tuple(np.geomspace(1e-7, 1e-5, 5))


@dataclass
class HalvingWitness:
    x: np.ndarray
    face_P: FaceD            # face of P containing x, dim <= floor(d/2)
    face_negP: FaceD         # face of -P containing x, dim <= ceil(d/2)
    vertex_type: tuple       # (j, d - j) tight-row counts by provenance
    magnitude: float
    seed: int
    attempts: int


@dataclass
class SkeletonPlacement:
    entries: list            # (point, host FaceD with dim <= 1) pairs
    count: int
    target: np.ndarray

    def points(self) -> np.ndarray:
        return np.array([p for p, _ in self.entries])


@dataclass
class SkeletonCertificate:
    count: int
    sum_residual: float
    max_membership_error: float
    max_host_dim: int
    eps_geom: float
    eps_bal: float
    passed: bool


# --- halving witness ---------------------------------------------------------

def halving_point(H: HPolytope, seed=0, eps_mem=None) -> HalvingWitness:
    """Boundary point x with x on a floor(d/2)-face of P and -x likewise.

    Walks the skeleton of C = P (intersect) -P from a start vertex toward
    the antipode of the start; tight-set provenance counts change by at
    most one per edge, so a vertex with ceil(d/2) P-tight rows appears on
    the path.  Offsets of P are perturbed symmetrically when C is not
    simple, which keeps C centrally symmetric, then the chosen vertex is
    mapped back to unperturbed coordinates by least squares.
    """
    if not (H.b > 0).all():
        raise InputError("halving needs the origin strictly interior (b > 0)")
    d, m = H.d, H.m
    target_j = (d + 1) // 2
    C0 = intersect(H, reflect(H))

    attempts = 0
    reason = "no attempt ran"
    schedule = [(0.0, seed)] + [(mag, seed + i)
                                for i, mag in enumerate(PERTURB_MAGNITUDES)]
    for mag, s in schedule:
        attempts += 1
        Pt = H if mag == 0.0 else perturb(H, mag, s)
        Ct = intersect(Pt, reflect(Pt))
        # perturbed slacks sit near mag * b; classify tightness well below
        # that gap but well above vertex round-off
        eps_t = None if mag == 0.0 else 1e-4 * mag * (1.0 + float(Ct.b.max()))
        try:
            V = enumerate_vertices(Ct, eps_tight=eps_t, fallback=False)
        except QhullError:
            reason = "halfspace dual failed"
            continue
        if any(len(t) != d for t in V.tight_sets):
            reason = "intersection has a non-simple vertex"
            continue
        tight = _walk_to_type(V, m, d, target_j)
        if tight is None:
            reason = "antipodal vertex match failed"
            continue
        x = np.linalg.lstsq(C0.A[list(tight)], C0.b[list(tight)], rcond=None)[0]
        tol = 1e-7 * V.diam if eps_mem is None else float(eps_mem)
        norms = np.linalg.norm(C0.A, axis=1)
        resid = (C0.A @ x - C0.b) / norms
        if np.abs(resid[list(tight)]).max() > tol or resid.max() > tol:
            reason = "map-back point failed membership"
            continue
        j = sum(1 for i in tight if i < m)
        tp = tuple(sorted(i for i in tight if i < m))
        tn = tuple(sorted(i - m for i in tight if i >= m))
        return HalvingWitness(x, _face_of(H, tp, x), _face_of(reflect(H), tn, x),
                              (j, d - j), mag, s, attempts)
    raise PerturbationFailedError(
        f"no usable skeleton after {attempts} attempts: {reason}")


def _walk_to_type(V, m, d, target_j):
    """Tight set of the first path vertex with target_j P-tight rows."""
    n = len(V.vertices)
    mask = np.zeros((n, 2 * m), dtype=np.uint8)
    for i, t in enumerate(V.tight_sets):
        mask[i, list(t)] = 1
    j = mask[:, :m].sum(axis=1)
    if j[0] == target_j:
        return tuple(V.tight_sets[0])
    dist = np.linalg.norm(V.vertices + V.vertices[0], axis=1)
    anti = int(np.argmin(dist))
    if dist[anti] > 1e-9 * max(V.diam, 1.0):
        return None
    # simple polytope: vertices are adjacent iff they share d-1 tight rows
    mf = mask.astype(np.float32)
    common = mf @ mf.T
    path = _bfs_path(common == np.float32(d - 1), 0, anti)
    if path is None:
        return None
    for v in path:
        if j[v] == target_j:
            return tuple(V.tight_sets[v])
    raise WalkFailedError(
        f"no vertex of type ({target_j}, {d - target_j}) on a path with "
        f"endpoint types {j[0]} and {j[anti]}")


def _bfs_path(adj, start, goal):
    parent = {start: -1}
    queue = [start]
    while queue:
        nxt = []
        for u in queue:
            if u == goal:
                path = [u]
                while parent[path[-1]] != -1:
                    path.append(parent[path[-1]])
                return path[::-1]
            for v in np.nonzero(adj[u])[0]:
                v = int(v)
                if v not in parent:
                    parent[v] = u
                    nxt.append(v)
        queue = nxt
    return None


def _face_of(H: HPolytope, tight, x) -> FaceD:
    """Face of H whose tight set extends `tight`, with x as base point."""
    V = enumerate_vertices(H)
    members = tuple(i for i, t in enumerate(V.tight_sets)
                    if set(tight) <= set(t))
    canon = tight
    if members:
        canon = tuple(sorted(frozenset.intersection(
            *[frozenset(V.tight_sets[i]) for i in members])))
    if len(canon) == 0:
        basis = np.eye(H.d)
    else:
        basis = null_space(H.A[list(canon)]).T
    return FaceD(tuple(canon), members, basis.shape[0],
                 np.asarray(x, dtype=float), basis)


# --- recursive placements ----------------------------------------------------

@dataclass
class _Chart:
    """Affine coordinates of a face: ambient = base + y @ basis."""
    base: np.ndarray         # (d,) carried target, local origin
    basis: np.ndarray        # (f, d) orthonormal rows
    A: np.ndarray            # (mf, f)
    b: np.ndarray            # (mf,) slacks at the local origin


def _descend(chart: _Chart) -> _Chart:
    """Drop to the minimal face holding the local origin in its interior."""
    A, b, basis = chart.A, chart.b, chart.basis
    while len(basis):
        eps = 1e-8 * (1.0 + float(np.abs(b).max()) if len(b) else 1.0)
        tight = b <= eps
        if not tight.any():
            break
        ns = null_space(A[tight])
        if ns.shape[1] == 0:
            basis = np.empty((0, chart.base.shape[0]))
            A, b = np.empty((0, 0)), np.empty(0)
            break
        A2 = A[~tight] @ ns
        b2 = b[~tight]
        keep = np.linalg.norm(A2, axis=1) > 1e-10
        A2, b2 = A2[keep], b2[keep]
        nrm = np.linalg.norm(A2, axis=1)
        A, b = A2 / nrm[:, None], b2 / nrm
        basis = ns.T @ basis
    return _Chart(chart.base, basis, A, b)


def _translate(chart: _Chart, y) -> _Chart:
    y = np.asarray(y, dtype=float)
    return _Chart(chart.base + y @ chart.basis, chart.basis,
                  chart.A, chart.b - chart.A @ y)


def _chart_polygon(chart: _Chart):
    V = enumerate_vertices(hpolytope(chart.A, chart.b))
    ctr = V.vertices.mean(axis=0)
    ang = np.arctan2(V.vertices[:, 1] - ctr[1], V.vertices[:, 0] - ctr[0])
    order = list(np.argsort(ang, kind="stable"))
    k = order.index(min(order))
    order = order[k:] + order[:k]
    return validate_polygon(V.vertices[order])


def _place(chart: _Chart, count: int, seed: int, out: list):
    chart = _descend(chart)
    f = len(chart.basis)
    if f <= 1:
        out.extend([chart.base.copy() for _ in range(count)])
        return
    if f == 2:
        poly = _chart_polygon(chart)
        if count % 2 == 0:
            bp, bq = antipodal_about(poly, (0.0, 0.0))
            p = chart.base + eval_boundary(poly, bp) @ chart.basis
            q = chart.base + eval_boundary(poly, bq) @ chart.basis
            out.extend([p.copy() for _ in range(count // 2)])
            out.extend([q.copy() for _ in range(count // 2)])
        elif count == 3:
            pl = balance_iterative(poly, [1.0, 1.0, 1.0], target=(0.0, 0.0))
            for p2 in pl.points(poly):
                out.append(chart.base + p2 @ chart.basis)
        else:
            raise InputError(f"no 2-face placement for count {count}")
        return
    if f == 3 and count == 3:
        sp = three_on_edges(hpolytope(chart.A, chart.b), np.zeros(3))
        for p3, _ in sp.entries:
            out.append(chart.base + p3 @ chart.basis)
        return
    if count % 2:
        raise InputError(f"odd count {count} on a {f}-face")
    wit = halving_point(hpolytope(chart.A, chart.b), seed=seed)
    _place(_translate(chart, wit.x), count // 2, seed, out)
    _place(_translate(chart, -wit.x), count // 2, seed, out)


def _root_chart(H: HPolytope, target) -> _Chart:
    target = np.zeros(H.d) if target is None else np.asarray(target, dtype=float)
    b = H.b - H.A @ target
    if not (b > 0).all():
        raise InputError("target must be strictly interior")
    return _Chart(target, np.eye(H.d), H.A.copy(), b)


def pow2_points(H: HPolytope, k: int, seed=0) -> SkeletonPlacement:
    """2^k points on the 1-skeleton of H with barycenter at the origin.

    Recursively halves: a halving witness splits the problem into two
    faces of roughly half the dimension, each carrying half the points;
    dimension <= 1 collapses all points onto the target and dimension 2
    pairs them antipodally on the face polygon.
    """
    if k < 0 or H.d > 2 ** k:
        raise InputError(f"need d <= 2^k, got d={H.d}, k={k}")
    return _placement_from_recursion(H, 2 ** k, seed)


def compose_balance(H: HPolytope, seed=0) -> SkeletonPlacement:
    """d points on the 1-skeleton summing to the origin, d = 2^i * 3^j, j <= 1.

    Same recursion as pow2_points, with three_on_edges as the ternary base
    case on 3-faces and the three-unit-weight boundary balance on 2-faces.
    """
    n = H.d
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    threes = 0
    while n % 3 == 0:
        n //= 3
        threes += 1
    if n != 1 or threes > 1:
        raise UnsupportedDimensionError(
            f"dimension {H.d} is not 2^i * 3^j with j <= 1")
    return _placement_from_recursion(H, H.d, seed)


def _placement_from_recursion(H, count, seed):
    pts = []
    _place(_root_chart(H, None), count, seed, pts)
    V = enumerate_vertices(H)
    entries = [(p, _host_face(H, V, p)) for p in pts]
    return SkeletonPlacement(entries, count, np.zeros(H.d))


def placement_from_points(H: HPolytope, points, target=None) -> SkeletonPlacement:
    """Wrap raw coordinates as a placement, recomputing their host faces."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != H.d:
        raise InputError(f"need points of shape (n, {H.d})")
    V = enumerate_vertices(H)
    entries = [(p, _host_face(H, V, p)) for p in pts]
    target = np.zeros(H.d) if target is None else np.asarray(target, dtype=float)
    return SkeletonPlacement(entries, len(entries), target)


def _host_face(H: HPolytope, V, p) -> FaceD:
    """Minimal face of H containing p, as a FaceD (any dimension)."""
    p = np.asarray(p, dtype=float)
    norms = np.linalg.norm(H.A, axis=1)
    resid = np.abs(H.A @ p - H.b) / norms
    tol = max(H.eps_tight(), 1e-9 * max(V.diam, 1.0))
    tight = tuple(int(i) for i in np.nonzero(resid <= tol)[0])
    return _face_from_vrep(H, V, tight, p)


def _face_from_vrep(H, V, tight, point) -> FaceD:
    members = tuple(i for i, t in enumerate(V.tight_sets)
                    if set(tight) <= set(t))
    canon = tight
    if members:
        canon = tuple(sorted(frozenset.intersection(
            *[frozenset(V.tight_sets[i]) for i in members])))
    if len(canon) == 0:
        basis = np.eye(H.d)
    else:
        basis = null_space(H.A[list(canon)]).T
    return FaceD(canon, members, basis.shape[0],
                 np.asarray(point, dtype=float), basis)


# --- edge triples in 3D ------------------------------------------------------

def three_on_edges(H: HPolytope, target=None, eps_t=1e-9) -> SkeletonPlacement:
    """Three points on edges of a 3-polytope with barycenter at the target.

    Scans unordered edge triples (repeats allowed) in lexicographic order
    and solves the 3x3 system in the edge parameters; singular systems
    fall back to a line or plane intersection with the parameter cube.
    The first triple meeting the residual gate wins.
    """
    if H.d != 3:
        raise InputError("edge-triple balancing is a 3-polytope operation")
    target = np.zeros(3) if target is None else np.asarray(target, dtype=float)
    norms = np.linalg.norm(H.A, axis=1)
    if ((H.A @ target - H.b) / norms).max() > H.eps_tight():
        raise InputError("target must lie inside the polytope")

    V = enumerate_vertices(H)
    edge_faces = faces_of_dim(H, V, 1)
    if not edge_faces:
        raise NotFoundError("polytope has no edges")
    ends = []
    for f in edge_faces:
        mem = f.members
        if len(mem) > 2:
            pts = V.vertices[list(mem)]
            t = (pts - pts[0]) @ (pts[-1] - pts[0])
            mem = (mem[int(np.argmin(t))], mem[int(np.argmax(t))])
        ends.append((min(mem), max(mem)))
    U = V.vertices[[a for a, _ in ends]]
    D = V.vertices[[b for _, b in ends]] - U
    ne = len(ends)
    scale = max(V.diam, 1e-300)
    tol_res = 1e-10 * scale

    trips = np.array(list(combinations_with_replacement(range(ne), 3)))
    M = np.stack([D[trips[:, 0]], D[trips[:, 1]], D[trips[:, 2]]], axis=2)
    rhs = 3.0 * target - (U[trips[:, 0]] + U[trips[:, 1]] + U[trips[:, 2]])
    det = np.linalg.det(M)
    nonsing = np.abs(det) > 1e-12 * scale ** 3
    tsol = np.full((len(trips), 3), np.nan)
    if nonsing.any():
        tsol[nonsing] = np.linalg.solve(M[nonsing], rhs[nonsing, :, None])[:, :, 0]
    window = nonsing & (tsol >= -eps_t).all(axis=1) & (tsol <= 1 + eps_t).all(axis=1)

    for idx in np.nonzero(window | ~nonsing)[0]:
        if nonsing[idx]:
            t = np.clip(tsol[idx], 0.0, 1.0)
        else:
            t = _singular_triple(M[idx], rhs[idx], scale, eps_t)
            if t is None:
                continue
        i, j, k = trips[idx]
        pts = np.array([U[i] + t[0] * D[i], U[j] + t[1] * D[j], U[k] + t[2] * D[k]])
        if np.linalg.norm(pts.sum(axis=0) - 3.0 * target) > tol_res:
            continue
        entries = [(pts[0], edge_faces[i]), (pts[1], edge_faces[j]),
                   (pts[2], edge_faces[k])]
        return SkeletonPlacement(entries, 3, target)
    raise NotFoundError(
        f"no balanced edge triple: {ne} edges, {len(trips)} triples scanned, "
        f"target {target.tolist()}")


def _singular_triple(M, rhs, scale, eps_t):
    """Solve M t = rhs with t in [0,1]^3 when M is rank-deficient."""
    u, sv, vt = np.linalg.svd(M)
    rank = int((sv > 1e-12 * max(sv[0], scale)).sum())
    t0, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    if np.linalg.norm(M @ t0 - rhs) > 1e-9 * scale:
        return None
    if rank == 3:
        t = t0
    elif rank == 2:
        n = vt[2]
        lo, hi = -np.inf, np.inf
        for c in range(3):
            if abs(n[c]) <= 1e-12:
                if not (-eps_t <= t0[c] <= 1.0 + eps_t):
                    return None
                continue
            a, b = (0.0 - t0[c]) / n[c], (1.0 - t0[c]) / n[c]
            lo, hi = max(lo, min(a, b)), min(hi, max(a, b))
        if lo > hi + eps_t:
            return None
        lam = min(max(0.0, lo), hi)
        t = t0 + lam * n
    else:
        res = linprog(np.ones(3), A_eq=M, b_eq=rhs, bounds=[(0.0, 1.0)] * 3,
                      method="highs")
        if res.status != 0:
            return None
        t = res.x
    if (t < -eps_t).any() or (t > 1.0 + eps_t).any():
        return None
    return np.clip(t, 0.0, 1.0)


# --- four points via a planar section ----------------------------------------

def four_on_edges(P: Polyhedron3, plane: Plane3 = None) -> SkeletonPlacement:
    """Four points on mesh edges summing to the origin.

    An antipodal pair (q, -q) on the section loop pins down two host faces;
    an antipodal pair inside each face polygon about its section point then
    lands on the face's boundary edges.  A section point already sitting on
    an edge collapses its pair to two copies of itself.
    """
    if plane is None:
        plane = Plane3((0.0, 0.0, 1.0), 0.0)
    if abs(plane.offset) > 1e-12 * max(P.diam, 1.0):
        raise InputError("section plane must pass through the origin")
    sec = cross_section(P, plane)
    bq, bq2 = antipodal_about(sec.polygon, (0.0, 0.0))
    entries = []
    for bp in (bq, bq2):
        center3 = sec.to3d(eval_boundary(sec.polygon, bp))
        fid = int(sec.edge_faces[bp.edge])
        entries.extend(_face_pair(P, fid, center3))
    pts = np.array([p for p, _ in entries])
    return SkeletonPlacement(entries, 4, np.zeros(3))


def _face_pair(P: Polyhedron3, fid: int, center3):
    """Antipodal pair about center3 on the boundary of face fid."""
    loop = P.faces[fid]
    fn, fc = _face_frame(P.vertices, loop, P.diam)
    u2 = _any_perp(fn)
    w2 = np.cross(fn, u2)
    rel = P.vertices[loop] - fc
    poly = validate_polygon(np.stack([rel @ u2, rel @ w2], axis=1))
    c2 = np.array([(center3 - fc) @ u2, (center3 - fc) @ w2])
    out = []
    for bp in antipodal_about(poly, c2):
        p2 = eval_boundary(poly, bp)
        p3 = fc + p2[0] * u2 + p2[1] * w2
        a, b = loop[bp.edge], loop[(bp.edge + 1) % len(loop)]
        seg = P.vertices[[a, b]]
        direction = seg[1] - seg[0]
        basis = (direction / np.linalg.norm(direction))[None, :]
        host = FaceD((fid,), (a, b), 1, 0.5 * (seg[0] + seg[1]), basis)
        out.append((p3, host))
    return out


# --- product fixtures and low-skeleton separation -----------------------------

def prop9_fixture(d: int) -> HPolytope:
    """Product polytope whose k-skeleton misses its reflection for small k.

    Even d: the d/2-fold product of the equilateral triangle T with
    vertices (1,0), (-1/2, +-sqrt(3)/2); odd d: [-1,2] x T^((d-1)/2).
    """
    if d < 2:
        raise InputError("fixture needs d >= 2")
    s = math.sqrt(3.0) / 2.0
    tri = hpolytope([[-1.0, 0.0], [0.5, -s], [0.5, s]], [0.5, 0.5, 0.5])
    iv = hpolytope([[1.0], [-1.0]], [2.0, 1.0])
    out = iv if d % 2 else tri
    for _ in range((d - 2 if d % 2 == 0 else d - 1) // 2):
        out = product(out, tri)
    return out


def prop9_check(H: HPolytope, k: int) -> bool:
    """True iff no face of dim <= k of H meets the reflected body -H."""
    if k < 0:
        raise InputError("face dimension bound must be >= 0")
    V = enumerate_vertices(H)
    for dim in range(min(k, H.d) + 1):
        for f in faces_of_dim(H, V, dim):
            Vm = V.vertices[list(f.members)]
            # x = Vm^T lam, lam >= 0, sum lam = 1, and -x in H
            res = linprog(np.zeros(len(Vm)), A_ub=-H.A @ Vm.T, b_ub=H.b,
                          A_eq=np.ones((1, len(Vm))), b_eq=[1.0],
                          bounds=(0.0, None), method="highs")
            if res.status == 0:
                return False
    return True


# --- verification -------------------------------------------------------------

def verify_skeleton(body, placement: SkeletonPlacement, eps_geom=None,
                    eps_bal=None) -> SkeletonCertificate:
    """Check a placement: points on the 1-skeleton, sum at count * target.

    eps_geom is an absolute distance (default 1e-7 * diam); the sum
    residual is compared against eps_bal * diam (default eps_bal = 1e-8).
    """
    pts = placement.points()
    if len(pts) != placement.count:
        raise InputError("placement count does not match its entries")
    if isinstance(body, Polyhedron3):
        diam = body.diam
        mem_err, host_dim = _mesh_membership(body, pts, placement)
    else:
        V = enumerate_vertices(body)
        diam = max(V.diam, 1e-300)
        eg0 = 1e-7 * diam if eps_geom is None else float(eps_geom)
        mem_err, host_dim = _hrep_membership(body, V, pts, eg0)
    eg = 1e-7 * diam if eps_geom is None else float(eps_geom)
    eb = 1e-8 if eps_bal is None else float(eps_bal)
    ssum = float(np.linalg.norm(pts.sum(axis=0)
                                - placement.count * placement.target))
    passed = bool(mem_err <= eg and host_dim <= 1 and ssum <= eb * diam)
    return SkeletonCertificate(placement.count, ssum, float(mem_err),
                               int(host_dim), eg, eb, passed)


def _hrep_membership(H: HPolytope, V, pts, eg):
    norms = np.linalg.norm(H.A, axis=1)
    tol = max(H.eps_tight(), eg)
    worst, dim_max = 0.0, 0
    for p in pts:
        resid = np.abs(H.A @ p - H.b) / norms
        tight = tuple(int(i) for i in np.nonzero(resid <= tol)[0])
        face = _face_from_vrep(H, V, tight, p)
        dim_max = max(dim_max, face.dim)
        if not face.members:
            worst = max(worst, float("inf"))
            continue
        verts = V.vertices[list(face.members)]
        if len(verts) == 1:
            dist = float(np.linalg.norm(p - verts[0]))
        else:
            t = (verts - verts[0]) @ (verts[-1] - verts[0])
            a = verts[int(np.argmin(t))]
            b = verts[int(np.argmax(t))]
            dist = _point_segment_distance(p, a, b)
        worst = max(worst, dist)
    return worst, dim_max


def _mesh_membership(P: Polyhedron3, pts, placement):
    segs = set()
    for f in P.faces:
        for i, a in enumerate(f):
            b = f[(i + 1) % len(f)]
            segs.add((min(a, b), max(a, b)))
    segs = np.array(sorted(segs))
    A = P.vertices[segs[:, 0]]
    B = P.vertices[segs[:, 1]]
    D = B - A
    lens2 = (D * D).sum(axis=1)
    worst = 0.0
    for p in pts:
        t = np.clip(((p - A) * D).sum(axis=1) / lens2, 0.0, 1.0)
        d = np.linalg.norm(A + t[:, None] * D - p, axis=1)
        worst = max(worst, float(d.min()))
    dim_max = max((h.dim for _, h in placement.entries), default=0)
    return worst, dim_max


def _point_segment_distance(p, a, b):
    d = b - a
    t = float(np.clip((p - a) @ d / max(d @ d, 1e-300), 0.0, 1.0))
    return float(np.linalg.norm(a + t * d - p))
