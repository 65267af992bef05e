"""The ten acceptance criteria, at their stated tolerances and time limits.

Each criterion is a function returning ``(ok, detail)``.  Under pytest every
criterion is one test and a PASS/FAIL line per criterion is printed in the
terminal summary; ``python tests/test_acceptance.py`` prints the same lines.
"""

import sys
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from polyfat.analysis4d import fatness, is_2s2s, phi_coords, round_half_up
from polyfat.constructions import cell24, dvt, hypersimplex, midpoint_state, stacked_polytope
from polyfat.deformed import (
    build_deformed_product,
    f_projected_product,
    project_and_measure,
    verify_product_combinatorics,
    verify_survival,
)
from polyfat.fvectors import (
    FVector,
    euler_holds,
    f_cyclic,
    f_dual,
    f_glue,
    f_stack,
    f_truncate_simple_vertex,
    faces_by_enumeration,
    steinitz_member,
)
from polyfat.geometry import (
    combinatorially_equivalent,
    cross_polytope_vertices,
    cube_vertices,
    hull,
    lattice_is_dual,
    polar,
    simplex_vertices,
    vertex_enumeration,
)
from polyfat.packing import bs_gradient, bs_value
from polyfat.planar import build_quad_graph, platonic_maps, random_polytope_map
from polyfat.realize import edge_tangency, realize_steinitz, tutte_realization

F = Fraction
RANDOM_SEED = 20240611
RESULTS = {}

_CACHE = {}


def _corpus():
    """Platonic graphs plus 20 random 3-connected planar maps with <= 14 vertices."""
    if "corpus" not in _CACHE:
        rng = np.random.default_rng(RANDOM_SEED)
        maps = list(platonic_maps().items())
        maps += [(f"random {k}", random_polytope_map(rng, max_vertices=14)) for k in range(20)]
        _CACHE["corpus"] = maps
    return _CACHE["corpus"]


def _realized():
    if "realized" not in _CACHE:
        t0 = time.perf_counter()
        out = [(name, m, realize_steinitz(m)) for name, m in _corpus()]
        _CACHE["realized"] = (out, time.perf_counter() - t0)
    return _CACHE["realized"]


def _qhull_facets(V, tol=1e-9):
    """Facet vertex sets of conv(V) from qhull, merging coplanar triangles."""
    return {frozenset(np.flatnonzero(np.abs(V @ eq[:3] + eq[3]) < tol).tolist())
            for eq in ConvexHull(V).equations}


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# ---------------------------------------------------------------------------
# criteria

def criterion_1():
    f, dt = _timed(lambda: f_glue(f_cyclic(8, 25), f_truncate_simple_vertex(f_dual(f_cyclic(8, 25)))))
    target = (7149, 28800, 46800, 46400, 46400, 46800, 28800, 7149)
    return f.entries == target and dt < 1, f"f = {f.entries}, {dt:.3f} s"


def criterion_2():
    f, dt = _timed(lambda: f_stack(f_cyclic(20, 200), N=259 * 10**11))
    target = (5049794068451336750, 5043828885028647000, 5045792044986529500)
    got = (f[11], f[12], f[13])
    return got == target and dt < 1, f"(f11, f12, f13) = {got}, {dt:.3f} s"


def criterion_3():
    def check():
        for d in range(4, 9):
            for n in range(d + 1, 13):
                if faces_by_enumeration(d, n) != f_cyclic(d, n):
                    return False, (d, n)
        for n in range(5, 51):
            if f_cyclic(4, n).entries != (n, n * (n - 1) // 2, n * (n - 3), n * (n - 3) // 2):
                return False, (4, n)
        return True, None

    (ok, bad), dt = _timed(check)
    detail = "Gale enumeration and closed form agree" if ok else f"mismatch at (d, n) = {bad}"
    return ok and dt < 10, f"{detail}, {dt:.3f} s"


def criterion_4():
    out, dt = _realized()
    worst_grad, worst_tan = 0.0, 0.0
    for name, m, P in out:
        worst_grad = max(worst_grad, P.residuals["gradient"])
        tan, margin = edge_tangency(P.vertices, m.edges)
        worst_tan = max(worst_tan, tan)
        if margin <= 0 or _qhull_facets(P.vertices) != {frozenset(F_) for F_ in m.faces}:
            return False, f"{name}: combinatorics differ"
        if P.f_vector() != m.f_vector():
            return False, f"{name}: f-vector differs"
    ok = worst_grad <= 1e-12 and worst_tan <= 1e-7 and dt < 30
    return ok, f"{len(out)} maps, max gradient {worst_grad:.1e}, max tangency {worst_tan:.1e}, {dt:.1f} s"


def criterion_5():
    out, _ = _realized()
    checked = 0
    for name, m, P in out:
        if not any(len(F_) == 3 for F_ in m.faces):
            continue
        T, _ = tutte_realization(m)
        if not combinatorially_equivalent(T, P):
            return False, f"{name}: Tutte and packing disagree"
        checked += 1
    return checked > 0, f"{checked} maps with a triangular face agree"


def criterion_6():
    def check():
        runs = [(n, [0] * n) for n in range(6)]
        runs += [(5, [1, 2, 3, 4, 5]), (5, [4, 4, 4, 4, 4]), (5, [2, 0, 7, 3, 9])]
        fats = []
        for n, choices in runs:
            _, state = stacked_polytope(4, choices)
            D = dvt(state)
            f = D.f_vector()
            if f != (10 + 4 * n, 30 + 18 * n, 30 + 18 * n, 10 + 4 * n):
                return False, f"n={n} {choices}: f = {f}"
            if not is_2s2s(D.lattice):
                return False, f"n={n} {choices}: not 2s2s"
            Fa = fatness(f)
            if not F(4) <= Fa < F(9, 2):
                return False, f"n={n} {choices}: fatness {Fa}"
            fats.append(round_half_up(Fa))
        return True, f"fatness {', '.join(fats)}"

    (ok, detail), dt = _timed(check)
    return ok and dt < 60, f"{detail}, {dt:.1f} s"


def criterion_7():
    H, C = hypersimplex(), cell24()
    reg = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    O = dvt(midpoint_state(hull(reg)))
    ok = (
        H.f_vector() == (10, 30, 30, 10)
        and phi_coords(H.f_vector()) == (F(1, 8), F(1, 8))
        and fatness(H.f_vector()) == 4
        and C.f_vector() == (24, 96, 96, 24)
        and fatness(C.f_vector()) == F(86, 19)
        and round_half_up(fatness(C.f_vector())) == "4.526"
        and combinatorially_equivalent(O, hull(cross_polytope_vertices(3)))
    )
    return ok, f"hypersimplex {H.f_vector()}, 24-cell fatness {fatness(C.f_vector())}, DVT(tetrahedron) {O.f_vector()}"


def criterion_8():
    parts = []
    for r, n in [(2, 4), (3, 4), (3, 6), (4, 4)]:
        t0 = time.perf_counter()
        spec = build_deformed_product(r, n)
        if not (verify_product_combinatorics(spec) and verify_survival(spec)):
            return False, f"({r},{n}) verifiers fail"
        _, f, _, _ = project_and_measure(spec)
        dt = time.perf_counter() - t0
        if f != f_projected_product(r, n) or dt > 300:
            return False, f"({r},{n}): f = {f.entries}, {dt:.1f} s"
        if (r, n) == (2, 4) and f.entries != (16, 32, 24, 8):
            return False, "(2,4) is not the 4-cube"
        parts.append(f"({r},{n}) {dt:.1f} s")
    return True, "; ".join(parts)


def criterion_9():
    fails = []
    corpus = [hull(simplex_vertices(d)) for d in (2, 3, 4)] + [hull(cube_vertices(d)) for d in (3, 4)]
    corpus += [hull(cross_polytope_vertices(4)), hypersimplex(), cell24()]
    for P in corpus:
        f = P.f_vector()
        if not euler_holds(FVector(f)) or P.lattice.f_vector() != f:
            fails.append(f"Euler {f}")
        if vertex_enumeration(P.inequalities) != P:
            fails.append(f"round trip {f}")
        Q = polar(P)
        if Q.f_vector() != tuple(reversed(f)) or not lattice_is_dual(P.lattice, Q.lattice):
            fails.append(f"duality {f}")
    for g in [f_cyclic(d, n) for d in range(3, 9) for n in range(d + 1, 16)]:
        if not euler_holds(g):
            fails.append(f"Euler {g.entries}")
    out, _ = _realized()
    for name, m, P in out:
        if not steinitz_member(P.f_vector()):
            fails.append(f"Steinitz {name}")
    for f in [(10, 30, 30, 10), (24, 96, 96, 24), (16, 32, 24, 8), (7, 21, 28, 14), (64, 192, 192, 64)]:
        if fatness(f) != fatness(tuple(reversed(f))):
            fails.append(f"self-duality {f}")
    q = build_quad_graph(platonic_maps()["cube"])
    rho = np.random.default_rng(1).normal(size=q.n)
    g = bs_gradient(rho, q)
    h = 1e-5
    worst = 0.0
    for i in range(q.n):
        e = np.zeros(q.n)
        e[i] = h
        fd = (bs_value(rho + e, q) - bs_value(rho - e, q)) / (2 * h)
        worst = max(worst, abs(fd - g[i]) / max(abs(g[i]), 1e-3))
    if worst > 1e-6:
        fails.append(f"gradient rel err {worst:.1e}")
    return not fails, (", ".join(fails) if fails else f"all suites hold, gradient rel err {worst:.1e}")


def criterion_10():
    def check():
        for n in (4, 6, 8, 16, 64):
            vals = [fatness(f_projected_product(r, n).entries) for r in range(2, 41)]
            if any(b <= a for a, b in zip(vals, vals[1:])):
                return False, f"not increasing at n={n}"
        best = max((fatness(f_projected_product(r, n).entries), r, n)
                   for r in range(2, 41) for n in range(4, 65, 2))
        return best[0] > 8, f"max fatness {float(best[0]):.4f} at r={best[1]}, n={best[2]}"

    (ok, detail), dt = _timed(check)
    return ok and dt < 1, f"{detail}, {dt:.2f} s"


CRITERIA = [
    (1, "Eckhoff reproduction", criterion_1),
    (2, "dip reproduction", criterion_2),
    (3, "cyclic cross-validation", criterion_3),
    (4, "Steinitz realization", criterion_4),
    (5, "Tutte/packing agreement", criterion_5),
    (6, "DVT suite", criterion_6),
    (7, "named polytopes", criterion_7),
    (8, "deformed products", criterion_8),
    (9, "property suites", criterion_9),
    (10, "fatness trend", criterion_10),
]


def _line(k, name, ok, detail):
    return f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}"


@pytest.mark.parametrize("k,name,fn", CRITERIA, ids=[f"criterion_{k}" for k, _, _ in CRITERIA])
def test_criterion(k, name, fn):
    ok, detail = fn()
    RESULTS[k] = _line(k, name, ok, detail)
    print(RESULTS[k])
    assert ok, detail


if __name__ == "__main__":
    all_ok = True
    for k, name, fn in CRITERIA:
        ok, detail = fn()
        all_ok &= ok
        print(_line(k, name, ok, detail), flush=True)
    sys.exit(0 if all_ok else 1)
