"""Shared fixtures: the planar-map corpus and small exact polytopes."""

import sys
from fractions import Fraction

import numpy as np
import pytest

from polyfat.geometry import cross_polytope_vertices, cube_vertices, hull, simplex_vertices
from polyfat.planar import platonic_maps, prism_map, random_polytope_map

RANDOM_SEED = 20240611


@pytest.fixture(scope="session")
def platonic():
    return platonic_maps()


@pytest.fixture(scope="session")
def random_maps():
    """Twenty random 3-connected planar maps with at most 14 vertices."""
    rng = np.random.default_rng(RANDOM_SEED)
    return [random_polytope_map(rng, max_vertices=14) for _ in range(20)]


@pytest.fixture(scope="session")
def map_corpus(platonic, random_maps):
    maps = list(platonic.values()) + [prism_map(k) for k in (3, 5, 6)]
    return maps + list(random_maps)


@pytest.fixture(scope="session")
def cube3():
    return hull(cube_vertices(3))


@pytest.fixture(scope="session")
def exact_corpus():
    """Small full-dimensional polytopes in dimensions 2 to 4."""
    half = Fraction(1, 2)
    skew = [(x + half * y, y, z + Fraction(1, 3) * x) for x, y, z in cube_vertices(3)]
    return {
        "triangle": hull(simplex_vertices(2)),
        "square": hull(cube_vertices(2)),
        "tetrahedron": hull(simplex_vertices(3)),
        "cube": hull(cube_vertices(3)),
        "skew cube": hull(skew),
        "octahedron": hull(cross_polytope_vertices(3)),
        "4-simplex": hull(simplex_vertices(4)),
        "4-cube": hull(cube_vertices(4, -1, 1)),
        "4-cross": hull(cross_polytope_vertices(4)),
    }


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
