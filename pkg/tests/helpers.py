"""Shared fixture generators for the test suite."""

import numpy as np
from scipy.spatial import ConvexHull

from poise.balance2d import feasibility
from poise.geom2d import validate_polygon
from poise.geom3d import validate_polyhedron
from poise.polytoped import chebyshev_center, hpolytope, hull_of_points


def star_polygon(rng, n, r_lo=0.3, r_hi=1.5):
    """Random simple polygon, star-shaped about the interior origin.

    Angular gaps stay well below pi so every boundary chord keeps a
    positive distance from the origin.
    """
    gaps = rng.uniform(0.7, 1.0, size=n)
    ang = 2 * np.pi * np.cumsum(gaps) / gaps.sum()
    rad = rng.uniform(r_lo, r_hi, size=n)
    return validate_polygon(np.column_stack([rad * np.cos(ang),
                                             rad * np.sin(ang)]))


def feasible_weights(rng, k):
    """k positive weights with the largest at most the sum of the rest."""
    if k == 2:
        w = float(rng.uniform(0.5, 2.0))
        return [w, w]
    while True:
        w = rng.uniform(0.1, 1.0, size=k).tolist()
        if feasibility(w):
            return w


def convex_mesh(points):
    """Triangulated convex hull as a validated closed surface."""
    points = np.asarray(points, dtype=float)
    hull = ConvexHull(points)
    cen = points[np.unique(hull.simplices)].mean(axis=0)
    faces = []
    for simp in hull.simplices:
        a, b, c = points[simp]
        n = np.cross(b - a, c - a)
        faces.append(list(simp) if n @ (a - cen) > 0 else list(simp[::-1]))
    return validate_polyhedron(points, faces)


def sphere_points(rng, n):
    pts = rng.normal(size=(n, 3))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def star_mesh(rng, subdiv=1, r_lo=0.7, r_hi=1.3):
    """Radially jittered subdivided octahedron: non-convex, star about origin."""
    verts = [np.array(v, float) for v in
             [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]]
    faces = [(0, 2, 4), (2, 1, 4), (1, 3, 4), (3, 0, 4),
             (2, 0, 5), (1, 2, 5), (3, 1, 5), (0, 3, 5)]
    for _ in range(subdiv):
        idx = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in idx:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                idx[key] = len(verts) - 1
            return idx[key]

        nf = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            nf += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = nf
    V = np.array(verts) * rng.uniform(r_lo, r_hi, size=(len(verts), 1))
    return validate_polyhedron(V, [list(f) for f in faces])


def cube_mesh(half=1.0):
    v = half * np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1)
                         for z in (-1, 1)], float)
    faces = [[0, 1, 3, 2], [4, 6, 7, 5], [0, 4, 5, 1],
             [2, 3, 7, 6], [0, 2, 6, 4], [1, 5, 7, 3]]
    return validate_polyhedron(v, faces)


def octa_mesh():
    v = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0],
                  [0, -1, 0], [0, 0, 1], [0, 0, -1]], float)
    faces = [[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
             [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]]
    return validate_polyhedron(v, faces)


def tetra_mesh():
    return convex_mesh(np.array([[3, 0, 0], [0, 3, 0], [0, 0, 3],
                                 [-1, -1, -1]], float))


def random_hull_hrep(rng, d, npts=None):
    """Random bounded H-polytope with origin interior (Chebyshev-recentred)."""
    npts = d + 3 if npts is None else npts
    pts = rng.normal(size=(npts, d))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    H = hull_of_points(pts)
    c, _ = chebyshev_center(H)
    return hpolytope(H.A, H.b - H.A @ c)
