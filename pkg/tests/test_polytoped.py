import numpy as np
import pytest

from helpers import random_hull_hrep
from poise.errors import EmptyInteriorError, ParseError, UnboundedError
from poise.polytoped import (FROM_NEG, FROM_P, chebyshev_center, cross_hrep,
                             cube_hrep, dump_hrep_text, enumerate_vertices,
                             enumerate_vertices_bruteforce, faces_of_dim,
                             hpolytope, hull_of_points, intersect, load_hrep,
                             parse_hrep_text, perturb, product, reflect,
                             simplex_hrep, skeleton_graph, support,
                             validate_hrep)


def test_fixture_shapes():
    assert cube_hrep(3).m == 6 and cube_hrep(3).d == 3
    assert cross_hrep(3).m == 8
    assert simplex_hrep(3).m == 4
    assert cube_hrep(2, half=2.0).b.max() == 2.0


def test_qhull_matches_bruteforce_enumeration():
    rng = np.random.default_rng(13)
    cases = [cube_hrep(2), cube_hrep(3), cross_hrep(3), simplex_hrep(3),
             cube_hrep(4)] + [random_hull_hrep(rng, d) for d in (2, 3, 4)]
    for H in cases:
        fast = enumerate_vertices(H)
        slow = enumerate_vertices_bruteforce(H)
        assert np.allclose(fast.vertices, slow.vertices, atol=1e-9)
        assert fast.tight_sets == slow.tight_sets


def test_hypercube4_face_counts():
    H = cube_hrep(4)
    V = enumerate_vertices(H)
    counts = [len(V.vertices)] + [len(faces_of_dim(H, V, k)) for k in (1, 2, 3)]
    assert counts == [16, 32, 24, 8]
    # Euler characteristic of the boundary 3-sphere complex
    assert counts[0] - counts[1] + counts[2] - counts[3] == 0


def test_edges_have_two_endpoints_on_simple_polytopes():
    for H in (cube_hrep(3), simplex_hrep(4)):
        V = enumerate_vertices(H)
        for f in faces_of_dim(H, V, 1):
            assert len(f.members) == 2
            assert f.dim == 1


def test_skeleton_graph_cube():
    H = cube_hrep(3)
    V = enumerate_vertices(H)
    G = skeleton_graph(H, V)
    assert len(G.nodes) == 8 and len(G.edges) == 12
    assert all(len(G.adj[v]) == 3 for v in G.nodes)
    # connectivity by BFS
    seen = {0}
    stack = [0]
    while stack:
        for nb in G.adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    assert len(seen) == 8


def test_chebyshev_center_and_support():
    H = cube_hrep(3)
    c, r = chebyshev_center(H)
    assert np.allclose(c, 0.0, atol=1e-9) and r == pytest.approx(1.0)
    assert support(H, (1.0, 0.0, 0.0)) == pytest.approx(1.0)
    assert support(H, (1.0, 1.0, 1.0)) == pytest.approx(3.0)


def test_reflect_intersect_tags():
    H = cube_hrep(2)
    R = reflect(H)
    assert np.array_equal(R.A, -H.A) and np.array_equal(R.b, H.b)
    C = intersect(H, R)
    assert C.m == 8
    assert list(C.tags) == [FROM_P] * 4 + [FROM_NEG] * 4


def test_perturb_bounds_and_determinism():
    H = simplex_hrep(3)
    mag = 1e-6
    P1 = perturb(H, mag, seed=4)
    P2 = perturb(H, mag, seed=4)
    P3 = perturb(H, mag, seed=5)
    assert np.array_equal(P1.b, P2.b)
    assert not np.array_equal(P1.b, P3.b)
    assert np.array_equal(P1.A, H.A)
    ratio = P1.b / H.b
    assert (ratio > 1.0).all() and (ratio <= 1.0 + mag + 1e-15).all()


def test_hull_of_points_drops_interior_points():
    corners = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1)
                        for z in (-1, 1)], float)
    pts = np.vstack([corners, [[0.0, 0.0, 0.0], [0.2, 0.1, -0.3]]])
    H = hull_of_points(pts)
    assert H.m == 6
    V = enumerate_vertices(H)
    assert len(V.vertices) == 8
    assert np.allclose(np.sort(np.abs(V.vertices).ravel()), 1.0)


def test_enumerate_handles_many_duplicate_intersections():
    ang = np.linspace(0, 2 * np.pi, 300, endpoint=False)
    pts = np.column_stack([np.cos(ang), np.sin(ang)])
    H = hull_of_points(pts)
    V = enumerate_vertices(H)
    assert len(V.vertices) == 300
    assert np.allclose(np.linalg.norm(V.vertices, axis=1), 1.0, atol=1e-9)
    assert all(len(t) >= 2 for t in V.tight_sets)


def test_product_dimensions():
    H = product(cube_hrep(2), simplex_hrep(3))
    assert H.d == 5 and H.m == 4 + 4
    V = enumerate_vertices(H)
    assert len(V.vertices) == 4 * 4  # vertex counts multiply


def test_parse_dump_round_trip_and_errors():
    H = cross_hrep(3)
    again = parse_hrep_text(dump_hrep_text(H))
    assert np.array_equal(again.A, H.A) and np.array_equal(again.b, H.b)
    with pytest.raises(ParseError):
        parse_hrep_text("1 0\n")
    with pytest.raises(UnboundedError):
        validate_hrep(hpolytope([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]],
                                [1.0, 1.0, 1.0]))
    with pytest.raises(EmptyInteriorError):
        validate_hrep(hpolytope([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]],
                                [1.0, -2.0, 1.0]))


def test_load_hrep(tmp_path):
    path = tmp_path / "c.hrep"
    path.write_text(dump_hrep_text(cube_hrep(2)))
    H = load_hrep(path)
    assert H.d == 2 and H.m == 4
