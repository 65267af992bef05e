"""Exact polytope kernel: hull, vertex enumeration, lattices and predicates."""

import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from polyfat.constructions import cell24, cell24_inequalities, hypersimplex, hypersimplex_points
from polyfat.deformed import deformed_cube, deformed_interval_square
from polyfat.errors import (
    IncidenceError,
    InfeasibleError,
    LowerDimensionalError,
    ResourceLimitError,
    UnboundedError,
)
from polyfat.geometry import (
    affine_restriction,
    beyond_facets,
    combinatorially_equivalent,
    cube_vertices,
    face_lattice,
    face_survives,
    hull,
    is_beneath,
    is_beyond,
    lattice_is_dual,
    polar,
    positively_spans,
    project_last,
    simplex_vertices,
    vertex_enumeration,
)

F = Fraction


# ---------------------------------------------------------------------------
# hull

def test_triangle():
    P = hull([(0, 0), (1, 0), (0, 1)])
    assert P.n_vertices == 3 and P.n_facets == 3
    assert P.f_vector() == (3, 3)


def test_unit_cube(cube3):
    assert cube3.f_vector() == (8, 12, 6)
    assert all(len(F_) == 4 for F_ in cube3.incidences)


def test_hypersimplex_f_vector_and_facets():
    P = hypersimplex()
    assert P.f_vector() == (10, 30, 30, 10)
    sizes = sorted(len(F_) for F_ in P.incidences)
    # five tetrahedra (4 vertices) and five octahedra (6 vertices)
    assert sizes == [4] * 5 + [6] * 5


def test_hypersimplex_restriction_matches_any_dropped_coordinate():
    pts = hypersimplex_points()
    for k in range(5):
        Q = hull(affine_restriction(pts, [k]))
        assert combinatorially_equivalent(Q, hypersimplex())


def test_redundant_points_are_dropped(cube3):
    extra = list(cube_vertices(3)) + [(F(1, 2), F(1, 2), F(1, 2)), (F(1, 2), 0, 0), (1, 1, F(1, 3))]
    P = hull(extra)
    assert P.vertices == cube3.vertices
    assert P.inequalities == cube3.inequalities


def test_output_is_canonical():
    pts = list(cube_vertices(3))
    random.Random(3).shuffle(pts)
    assert hull(pts) == hull(cube_vertices(3))


def test_lower_dimensional_input_reports_affine_dimension():
    with pytest.raises(LowerDimensionalError) as exc:
        hull([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert exc.value.affine_dim == 2
    with pytest.raises(LowerDimensionalError) as exc:
        hull(hypersimplex_points())
    assert exc.value.affine_dim == 4


def test_every_vertex_satisfies_every_inequality(exact_corpus):
    for P in exact_corpus.values():
        for v in P.vertices:
            assert P.contains(v)
        for F_ in P.incidences:
            assert len(F_) >= P.dim


@pytest.mark.parametrize("seed", range(15))
def test_hull_vertices_match_qhull(seed):
    rng = np.random.default_rng(seed)
    pts = rng.integers(-10**6, 10**6, size=(25, 3))
    P = hull([tuple(int(x) for x in p) for p in pts])
    oracle = {tuple(int(x) for x in pts[i]) for i in ConvexHull(pts).vertices}
    assert {tuple(int(x) for x in v) for v in P.vertices} == oracle


# ---------------------------------------------------------------------------
# vertex enumeration

def test_cube_inequalities():
    rows = []
    for i in range(3):
        rows.append(tuple([0] + [int(k == i) for k in range(3)]))
        rows.append(tuple([1] + [-int(k == i) for k in range(3)]))
    P = vertex_enumeration(rows)
    assert P.n_vertices == 8 and P == hull(cube_vertices(3))


def test_cell24_inequalities_give_cell24():
    P = vertex_enumeration(cell24_inequalities())
    assert P.n_vertices == 24
    assert P == cell24()


def test_cell24_system_with_unit_box_is_cross_polytope():
    # |x_i| <= 1 together with the 16 sign rows: the box rows are redundant
    rows = []
    for i in range(4):
        for s in (1, -1):
            rows.append((1,) + tuple(-s * int(k == i) for k in range(4)))
    for mask in range(16):
        signs = tuple(1 if mask >> k & 1 else -1 for k in range(4))
        rows.append((1,) + tuple(-s for s in signs))
    P = vertex_enumeration(rows)
    assert P.n_vertices == 8 and P.f_vector() == (8, 24, 32, 16)


def test_deformed_square_with_large_M_is_a_product():
    spec = deformed_interval_square(F(1, 2), F(1, 3), M=F(3))
    P = vertex_enumeration(spec.homogeneous())
    assert P.n_vertices == 4


def test_return_tight_sets(cube3):
    P, tight = vertex_enumeration(cube3.inequalities, return_tight=True)
    assert P == cube3
    assert all(len(t) == 3 for t in tight)


def test_unbounded_system_reports_recession_ray():
    rows = [(0, 1, 0), (0, 0, 1), (5, -1, 1)]
    with pytest.raises(UnboundedError) as exc:
        vertex_enumeration(rows)
    ray = exc.value.ray
    assert any(x != 0 for x in ray)
    for a in rows:
        assert sum(ai * ri for ai, ri in zip(a[1:], ray)) >= 0


def test_infeasible_system_reports_farkas_certificate():
    rows = [(-2, 1, 0), (1, -1, 0), (0, 0, 1), (1, 0, -1)]
    with pytest.raises(InfeasibleError) as exc:
        vertex_enumeration(rows)
    y = exc.value.certificate
    assert len(y) == len(rows) and all(yi >= 0 for yi in y)
    for k in range(1, 3):
        assert sum(yi * a[k] for yi, a in zip(y, rows)) == 0
    assert sum(yi * a[0] for yi, a in zip(y, rows)) < 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-6, 6)] * 3), min_size=4, max_size=14, unique=True))
def test_round_trip_hull_and_vertex_enumeration(points):
    try:
        P = hull(points)
    except LowerDimensionalError:
        assume(False)
    Q = vertex_enumeration(P.inequalities)
    assert Q.vertices == P.vertices
    assert Q.inequalities == P.inequalities


def test_round_trip_on_corpus(exact_corpus):
    for P in exact_corpus.values():
        assert vertex_enumeration(P.inequalities) == P


# ---------------------------------------------------------------------------
# face lattice

def test_tetrahedron_lattice():
    L = face_lattice(hull(simplex_vertices(3)))
    assert sum(len(r) for r in L.ranks) == 16  # 2^4 subsets including empty and full
    assert L.f_vector() == (4, 6, 4)


def test_four_cube_lattice(exact_corpus):
    assert exact_corpus["4-cube"].f_vector() == (16, 32, 24, 8)


def test_euler_poincare_on_corpus(exact_corpus):
    for P in exact_corpus.values():
        f = P.f_vector()
        d = P.dim
        assert sum((-1) ** i * x for i, x in enumerate(f)) == 1 - (-1) ** d


def test_lattice_covers_are_inclusions(exact_corpus):
    for P in exact_corpus.values():
        L = P.lattice
        for r, pairs in enumerate(L.covers):
            for i, j in pairs:
                assert set(L.ranks[r][i]) < set(L.ranks[r + 1][j])


def test_meets_are_intersections():
    P = hypersimplex()
    faces = {frozenset(f) for r in P.lattice.ranks for f in r}
    for G, H in combinations(list(faces), 2):
        assert G & H in faces


# ---------------------------------------------------------------------------
# beyond / beneath and projections

def test_beyond_cube_facet(cube3):
    p = (2, F(1, 2), F(1, 2))
    assert len(beyond_facets(p, cube3)) == 1
    j = beyond_facets(p, cube3)[0]
    assert cube3.inequalities[j][1:] == (-1, 0, 0)
    assert all(is_beneath(p, k, cube3) for k in range(6) if k != j)


def test_interior_point_beneath_all(cube3):
    c = (F(1, 2),) * 3
    assert all(is_beneath(c, k, cube3) and not is_beyond(c, k, cube3) for k in range(6))


def test_point_on_hyperplane_raises(cube3):
    with pytest.raises(IncidenceError):
        beyond_facets((1, F(1, 2), F(1, 2)), cube3)


def test_project_identity_and_square(exact_corpus):
    C4 = exact_corpus["4-cube"]
    assert project_last(C4, 4) == C4
    sq = project_last(exact_corpus["cube"], 2)
    assert sq.f_vector() == (4, 4)


def test_deformed_cube_projects_to_octagon():
    spec = deformed_cube()
    P = vertex_enumeration(spec.homogeneous())
    assert P.n_vertices == 8
    Q = project_last(P, 2)
    assert Q.n_vertices == 8
    assert all(face_survives({i}, P, 2) for i in range(8))


def test_positively_spans():
    assert positively_spans([(1, 0), (0, 1), (-1, -1)], 2)
    assert not positively_spans([(1, 0), (0, 1)], 2)
    assert not positively_spans([(1, 0), (-1, 0)], 2)
    assert positively_spans([(1,), (-1,)], 1)
    assert positively_spans([], 0)


def test_facets_never_survive(exact_corpus):
    for P in exact_corpus.values():
        for k in range(1, P.dim):
            for F_ in P.incidences:
                assert not face_survives(F_, P, k)


# ---------------------------------------------------------------------------
# equivalence and polarity

def test_combinatorial_equivalence(exact_corpus):
    assert combinatorially_equivalent(exact_corpus["cube"], exact_corpus["skew cube"])
    assert not combinatorially_equivalent(exact_corpus["cube"], exact_corpus["octahedron"])


def test_equivalence_resource_limit(exact_corpus):
    with pytest.raises(ResourceLimitError):
        combinatorially_equivalent(exact_corpus["4-cube"], exact_corpus["4-cube"], max_nodes=10)


def test_polar_reverses_lattice(exact_corpus):
    for name, P in exact_corpus.items():
        Q = polar(P)
        assert Q.f_vector() == tuple(reversed(P.f_vector())), name
        assert lattice_is_dual(P.lattice, Q.lattice), name


def test_polar_pairs(exact_corpus):
    assert combinatorially_equivalent(polar(exact_corpus["cube"]), exact_corpus["octahedron"])
    assert combinatorially_equivalent(polar(exact_corpus["4-cross"]), exact_corpus["4-cube"])
    assert combinatorially_equivalent(polar(polar(hypersimplex())), hypersimplex())


def test_self_duality_of_lattices(exact_corpus):
    assert lattice_is_dual(cell24().lattice, cell24().lattice)
    assert lattice_is_dual(exact_corpus["4-simplex"].lattice, exact_corpus["4-simplex"].lattice)
    assert not lattice_is_dual(exact_corpus["4-cube"].lattice, exact_corpus["4-cube"].lattice)
    assert not lattice_is_dual(hypersimplex().lattice, hypersimplex().lattice)
