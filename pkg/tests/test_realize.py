"""Steinitz realizations: circle packing lift and Tutte-Maxwell lift."""

from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from polyfat.errors import PreconditionError, RealizationError
from polyfat.fvectors import steinitz_member
from polyfat.geometry import combinatorially_equivalent
from polyfat.packing import layout_kites, solve_radii
from polyfat.planar import PlanarMap, build_quad_graph, random_polytope_map
from polyfat.realize import (
    SphericalPattern,
    circle_angle_cos,
    circle_to_plane,
    edge_tangency,
    inverse_stereographic,
    line_to_plane,
    maxwell_lift,
    polytope_from_pattern,
    realize_steinitz,
    spherical_residuals,
    tutte_embedding,
    tutte_realization,
)

K4 = PlanarMap(((1, 2, 3), (0, 3, 2), (0, 1, 3), (0, 2, 1)))


def qhull_facets(V, tol=1e-9):
    """Facets of conv(V) as vertex sets, merging coplanar qhull triangles."""
    h = ConvexHull(V)
    facets = []
    for eq in h.equations:
        on = frozenset(np.flatnonzero(np.abs(V @ eq[:3] + eq[3]) < tol).tolist())
        if on not in facets:
            facets.append(on)
    return set(facets)


@pytest.fixture(scope="module")
def realized(platonic, random_maps):
    out = [(name, m, realize_steinitz(m)) for name, m in platonic.items()]
    out += [(f"random {k}", m, realize_steinitz(m)) for k, m in enumerate(random_maps)]
    return out


# ---------------------------------------------------------------------------
# circles on the sphere

def test_unit_circle_lifts_to_equator():
    n, h = circle_to_plane((0.0, 0.0), 1.0)
    assert h == pytest.approx(0, abs=1e-15)
    assert np.allclose(np.abs(n), (0, 0, 1))


def test_lines_pass_through_pole():
    for a, b in (((0.0, 1.0), 0.7), ((1.0, 0.0), -2.0)):
        n, h = line_to_plane(a, b)
        assert float(n @ np.array([0, 0, 1.0])) == pytest.approx(h)


def test_circle_plane_against_explicit_lift():
    c, r = np.array([0.4, -1.3]), 0.8
    n, h = circle_to_plane(c, r)
    for t in np.linspace(0, 2 * np.pi, 9):
        p = c + r * np.array([np.cos(t), np.sin(t)])
        s = float(p @ p)
        X = np.array([2 * p[0], 2 * p[1], s - 1]) / (s + 1)
        assert float(n @ X) == pytest.approx(h, abs=1e-12)


def test_angle_cos_tangent_and_orthogonal():
    # two tangent unit circles in the plane stay tangent on the sphere
    p1, p2 = circle_to_plane((0.0, 0.0), 1.0), circle_to_plane((2.0, 0.0), 1.0)
    assert abs(circle_angle_cos(p1, p2)) == pytest.approx(1, abs=1e-12)
    q1, q2 = circle_to_plane((0.0, 0.0), 1.0), circle_to_plane((np.sqrt(2), 0.0), 1.0)
    assert circle_angle_cos(q1, q2) == pytest.approx(0, abs=1e-12)


def test_cube_spherical_pattern(platonic):
    pat = layout_kites(solve_radii(build_quad_graph(platonic["cube"])))
    sp = inverse_stereographic(pat)
    assert isinstance(sp, SphericalPattern)
    assert len(sp.facets) == 6 and len(sp.horizons) == 8
    tang, orth = spherical_residuals(sp)
    assert tang < 1e-9 and orth < 1e-9


# ---------------------------------------------------------------------------
# the circle packing route

def test_realizations_tangent_and_combinatorial(realized):
    for name, m, P in realized:
        assert P.residuals["gradient"] <= 1e-12, name
        worst, margin = edge_tangency(P.vertices, m.edges)
        assert worst <= 1e-7 and margin > 0, name
        assert qhull_facets(P.vertices) == {frozenset(F) for F in m.faces}, name
        assert steinitz_member(P.f_vector()), name


def test_k4_edge_tangent_tetrahedron(realized):
    P = next(P for name, m, P in realized if name == "tetrahedron")
    assert P.f_vector() == (4, 6, 4)
    # every vertex of an edge-tangent polytope lies outside the sphere
    assert np.all(np.linalg.norm(P.vertices, axis=1) > 1)
    assert edge_tangency(P.vertices, K4.edges)[0] <= 1e-7


def test_cube_and_dodecahedron(realized):
    for name, nv in (("cube", 8), ("dodecahedron", 20)):
        P = next(P for n_, m, P in realized if n_ == name)
        assert P.n_vertices == nv
        assert P.residuals["tangency"] <= 1e-7


def test_steinitz_membership_fifty_random_maps():
    rng = np.random.default_rng(99)
    for _ in range(50):
        m = random_polytope_map(rng, max_vertices=12)
        P = realize_steinitz(m)
        assert steinitz_member(P.f_vector())
        assert P.f_vector() == m.f_vector()


def test_other_edge_at_infinity(platonic):
    m = platonic["octahedron"]
    for f in m.edges[:4]:
        P = realize_steinitz(m, f=f)
        assert edge_tangency(P.vertices, m.edges)[0] <= 1e-7


def test_corrupted_pattern_is_rejected(platonic):
    m = platonic["cube"]
    pat = layout_kites(solve_radii(build_quad_graph(m)))
    sp = inverse_stereographic(pat)
    facets = dict(sp.facets)
    n, h = facets[0]
    facets[0] = (n, h * 0.7)
    bad = SphericalPattern(m, facets, sp.horizons, sp.scale)
    with pytest.raises(RealizationError):
        polytope_from_pattern(bad)


# ---------------------------------------------------------------------------
# the Tutte-Maxwell route

def _segments_cross(p, q, r, s):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    return orient(p, q, r) * orient(p, q, s) < 0 and orient(r, s, p) * orient(r, s, q) < 0


def test_tutte_drawing_is_plane(platonic, random_maps):
    for m in [platonic["icosahedron"], platonic["octahedron"]] + list(random_maps):
        if not any(len(F) == 3 for F in m.faces):
            continue
        D = tutte_embedding(m)
        pos = D.positions
        assert all(isinstance(x, Fraction) for p in pos for x in p)
        E = m.edges
        for i in range(len(E)):
            for j in range(i + 1, len(E)):
                a, b = E[i]
                c, d = E[j]
                if {a, b} & {c, d}:
                    continue
                assert not _segments_cross(pos[a], pos[b], pos[c], pos[d])


def test_tutte_needs_triangle(platonic):
    with pytest.raises(PreconditionError):
        tutte_embedding(platonic["cube"])
    with pytest.raises(PreconditionError):
        tutte_embedding(platonic["cube"], outer_face=0)


def test_k4_lift_is_tetrahedron():
    P, info = tutte_realization(K4)
    assert P.f_vector() == (4, 6, 4)
    assert info["via_dual"] is False
    assert all(isinstance(z, Fraction) for z in info["heights"])


def test_maxwell_lift_is_convex_and_exact(platonic):
    D = tutte_embedding(platonic["icosahedron"])
    P, info = maxwell_lift(D)
    assert P.f_vector() == (12, 30, 20)
    lo, hi = info["height_range"]
    assert lo == 0 and hi > 0


def test_tutte_matches_packing(realized):
    for name, m, Pp in realized:
        Pt, info = tutte_realization(m)
        assert combinatorially_equivalent(Pt, Pp), name
        assert info["via_dual"] == (not any(len(F) == 3 for F in m.faces))


def test_tutte_rejects_non_3_connected():
    square = PlanarMap(((1, 3), (2, 0), (3, 1), (0, 2)))
    with pytest.raises(PreconditionError):
        tutte_realization(square)


def test_cube_goes_through_dual(platonic):
    P, info = tutte_realization(platonic["cube"])
    assert info["via_dual"] and P.f_vector() == (8, 12, 6)
    assert all(isinstance(x, Fraction) for v in P.vertices for x in v)
