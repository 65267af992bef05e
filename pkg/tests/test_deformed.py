"""Deformed products of polygons: exact verification and projection."""

from fractions import Fraction

import pytest

from polyfat.analysis4d import fatness
from polyfat.deformed import (
    assemble,
    block_weights,
    build_deformed_product,
    deformed_interval_square,
    f_projected_product,
    ngon_hrep,
    orthogonal_product,
    product_vertices,
    project_and_measure,
    solve_block_params,
    verify_product_combinatorics,
    verify_survival,
    weighted_row_residual,
)
from polyfat.errors import DomainError
from polyfat.fvectors import euler_holds
from polyfat.geometry import face_survives, hull, vertex_enumeration

F = Fraction


@pytest.fixture(scope="module")
def built():
    return {rn: build_deformed_product(*rn) for rn in [(2, 4), (3, 4), (3, 6), (4, 4)]}


# ---------------------------------------------------------------------------
# polygons and block parameters

@pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 12])
def test_ngon(n):
    poly = ngon_hrep(n)
    assert len(poly.vertices()) == n
    # cyclically consecutive rows share a vertex
    for v, tight in poly.vertices():
        i, j = sorted(tight)
        assert j - i == 1 or (i, j) == (0, n - 1)


def test_ngon_domain():
    with pytest.raises(DomainError):
        ngon_hrep(2)


def test_weights_positive_off_the_omitted_block():
    for t in range(6):
        for k in range(-4, 10):
            a, b = block_weights(k, t)
            if k == t:
                assert a == b == 0
            else:
                assert a > 0 and b > 0


@pytest.mark.parametrize("r", [3, 4, 5])
def test_block_params_kill_weighted_rows(r):
    params = solve_block_params(r)
    for t in range(r):
        assert all(x == 0 for x in weighted_row_residual(r, params, t))


def test_block_params_independent_of_r():
    assert solve_block_params(3) == solve_block_params(5)


# ---------------------------------------------------------------------------
# verifiers

def test_orthogonal_product():
    spec = orthogonal_product(3, 4)
    assert verify_product_combinatorics(spec)
    verdict = verify_survival(spec)
    assert not verdict and verdict.counterexample is not None


def test_orthogonal_product_vertex_count():
    spec = orthogonal_product(2, 6)
    assert vertex_enumeration(spec.homogeneous()).n_vertices == 36


@pytest.mark.parametrize("a,b", [(F(1, 2), F(1, 3)), (F(2), F(3)), (F(1), F(1))])
def test_interval_square_threshold(a, b):
    assert verify_product_combinatorics(deformed_interval_square(a, b, a + b + F(1, 10)))
    assert not verify_product_combinatorics(deformed_interval_square(a, b, a + b))
    assert not verify_product_combinatorics(deformed_interval_square(a, b, (a + b) / 2))


def test_interval_square_oracle():
    # vertex enumeration of the same system agrees with the verifier
    for M in (F(1, 2), F(5, 6), F(1), F(2)):
        spec = deformed_interval_square(F(1, 2), F(1, 3), M)
        n = vertex_enumeration(spec.homogeneous()).n_vertices
        assert (n == 4 and M > F(5, 6)) == bool(verify_product_combinatorics(spec))


def test_r2_survival_is_vacuous():
    assert verify_survival(assemble(2, 4, F(1, 4), F(64)))


def test_built_specs_pass_both_verifiers(built):
    for (r, n), spec in built.items():
        assert verify_product_combinatorics(spec), (r, n)
        assert verify_survival(spec), (r, n)
        assert len(spec.matrix) == r * n
        assert len(product_vertices(spec)) == n ** r


def test_product_vertices_against_vertex_enumeration(built):
    spec = built[(3, 4)]
    P = vertex_enumeration(spec.homogeneous())
    assert P.dim == 6 and P.n_vertices == 64 and P.n_facets == 12
    assert set(P.vertices) == {v for v, _ in product_vertices(spec)}


def test_build_domain():
    with pytest.raises(DomainError):
        build_deformed_product(3, 5)
    with pytest.raises(DomainError):
        build_deformed_product(1, 4)


# ---------------------------------------------------------------------------
# projection

def test_closed_form_examples():
    assert f_projected_product(2, 4).entries == (16, 32, 24, 8)
    assert f_projected_product(3, 4).entries == (64, 192, 192, 64)
    assert f_projected_product(3, 6).entries == (216, 648, 594, 162)
    with pytest.raises(DomainError):
        f_projected_product(3, 5)


def test_closed_form_solves_the_double_count():
    for r in range(2, 9):
        for n in range(4, 21, 2):
            f = f_projected_product(r, n)
            N = n ** r
            p, c = r * n ** (r - 1), F((r - 2) * N, 4)
            assert f[3] == c + p
            assert 2 * f[2] == 6 * c + (n + 2) * p
            assert f[2] - f[3] == (r - 1) * N
            assert euler_holds(f)


@pytest.mark.parametrize("rn", [(2, 4), (3, 4), (3, 6), (4, 4)])
def test_projection_matches_formula(built, rn):
    r, n = rn
    Q, f, fat, census = project_and_measure(built[rn])
    assert f == f_projected_product(r, n)
    assert fat == fatness(f.entries)
    # facets are n-gon prisms (2n vertices) and combinatorial cubes (8 vertices)
    prisms = r * n ** (r - 1)
    cubes = (r - 2) * n ** r // 4
    if n == 4:
        assert census == {(8, 0): prisms + cubes}
    else:
        assert census == {(2 * n, 2): prisms, (8, 0): cubes}


def test_r2_projection_is_the_four_cube(built):
    Q, f, fat, _ = project_and_measure(built[(2, 4)])
    assert f.entries == (16, 32, 24, 8)


def test_fatness_value_r3_n4(built):
    assert project_and_measure(built[(3, 4)])[2] == F(364, 118)


def _polygon_faces(spec, P):
    """Vertex sets of the polygon 2-faces: vary one block, fix the others."""
    index = {v: i for i, v in enumerate(P.vertices)}
    groups = {}
    for v, tight in product_vertices(spec):
        blocks = tuple(frozenset(i for i in tight if i // spec.n == k) for k in range(spec.r))
        for k in range(spec.r):
            key = (k,) + blocks[:k] + blocks[k + 1:]
            groups.setdefault(key, set()).add(index[v])
    return list(groups.values())


def test_polygon_faces_survive_and_cover(built):
    spec = built[(3, 6)]
    P = spec.polytope()
    polys = _polygon_faces(spec, P)
    assert len(polys) == 3 * 6 ** 2 and all(len(g) == 6 for g in polys)
    assert all(face_survives(g, P, 4) for g in polys)
    # every vertex lies in a surviving polygon
    assert set().union(*polys) == set(range(P.n_vertices))


def test_orthogonal_polygons_do_not_survive():
    spec = orthogonal_product(3, 4)
    P = vertex_enumeration(spec.homogeneous())
    assert not any(face_survives(g, P, 4) for g in _polygon_faces(spec, P))


def test_projected_polygons_are_two_faces(built):
    spec = built[(3, 6)]
    Q = project_and_measure(spec)[0]
    hexagons = [g for g in Q.lattice.faces(2) if len(g) == 6]
    assert len(hexagons) == 3 * 6 ** 2
    edges = {frozenset(e) for e in Q.edges()}
    covered = set()
    for g in hexagons:
        covered |= {e for e in edges if e <= frozenset(g)}
    assert covered == edges


def test_fatness_monotone_and_large():
    for n in (4, 6, 10):
        vals = [fatness(f_projected_product(r, n).entries) for r in range(2, 30)]
        assert all(a < b for a, b in zip(vals, vals[1:]))
        assert all(v < 9 for v in vals)
    big = fatness(f_projected_product(60, 1000).entries)
    assert 8 < big < 9


def test_projected_hull_of_products_is_deterministic(built):
    spec = built[(3, 4)]
    verts = [v[-4:] for v, _ in product_vertices(spec)]
    assert hull(verts) == hull(list(reversed(verts)))
