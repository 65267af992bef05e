"""Exact 4-dimensional constructions: hypersimplex, 24-cell, stacked
polytopes and their deep vertex truncations.

Vertices are identified by their coordinates (tuples of Fraction) rather
than by index, because every ``hull`` call re-sorts its output.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ._linalg import (
    affine_rank,
    affine_value,
    dot,
    frac_vector,
    homogenize,
    integer_kernel_vector,
)
from .errors import AdmissibilityError, ConstructionError, DomainError
from .geometry import beyond_facets, cross_polytope_vertices, hull, simplex_vertices

__all__ = [
    "hypersimplex",
    "hypersimplex_points",
    "cell24",
    "cell24_inequalities",
    "cross_polytope",
    "DVTState",
    "midpoint_state",
    "stacked_polytope",
    "stack_step",
    "dvt",
    "dvt_admissible",
    "check_dvt",
]


def hypersimplex_points():
    """``e_i + e_j`` for ``1 <= i < j <= 5`` in R^5."""
    out = []
    for i, j in combinations(range(5), 2):
        v = [Fraction(0)] * 5
        v[i] = v[j] = Fraction(1)
        out.append(tuple(v))
    return out


def hypersimplex():
    """The hypersimplex, in R^4 by forgetting the last coordinate.

    The points lie in the hyperplane ``sum x = 2`` of R^5, so dropping one
    coordinate is an affine isomorphism onto a full-dimensional polytope.
    """
    return hull(p[:4] for p in hypersimplex_points())


def cell24():
    """``conv{+-1/2 e_i +- 1/2 e_j}``."""
    half = Fraction(1, 2)
    pts = []
    for i, j in combinations(range(4), 2):
        for si in (half, -half):
            for sj in (half, -half):
                v = [Fraction(0)] * 4
                v[i], v[j] = si, sj
                pts.append(tuple(v))
    return hull(pts)


def cell24_inequalities():
    """``|x_i| <= 1/2`` and ``+-x_1 +- x_2 +- x_3 +- x_4 <= 1`` as homogeneous rows."""
    rows = []
    for i in range(4):
        for s in (1, -1):
            rows.append((1,) + tuple(-2 * s * int(k == i) for k in range(4)))
    for signs in _sign_patterns(4):
        rows.append((1,) + tuple(-s for s in signs))
    return rows


def _sign_patterns(d):
    if d == 0:
        yield ()
        return
    for rest in _sign_patterns(d - 1):
        yield rest + (1,)
        yield rest + (-1,)


def cross_polytope(d=4):
    return hull(cross_polytope_vertices(d))


# ---------------------------------------------------------------------------
# deep vertex truncation

@dataclass(frozen=True)
class DVTState:
    """A polytope with truncation data.

    Attributes
    ----------
    polytope : ExactPolytope
    cuts : dict
        Vertex coordinates -> homogeneous integer row ``h`` with ``h(v) < 0``
        at the vertex and ``h >= 0`` on the kept side.
    points : dict
        ``frozenset({u, v})`` of vertex coordinates -> the point ``p_e``.
    """

    polytope: object
    cuts: dict
    points: dict


def _cut_through(points, v):
    rows = [homogenize(p) for p in points]
    d = len(v)
    n = integer_kernel_vector(rows, d + 1)
    if n is None:
        return None
    if dot(n, homogenize(v)) > 0:
        n = tuple(-x for x in n)
    return n


def _vertex_edges(P):
    """Map vertex coordinates -> list of (edge key, other endpoint)."""
    out = {v: [] for v in P.vertices}
    for i, j in P.edges():
        u, v = P.vertices[i], P.vertices[j]
        key = frozenset((u, v))
        out[u].append((key, v))
        out[v].append((key, u))
    return out


def _on_open_segment(p, u, v):
    # p = u + t (v - u) with 0 < t < 1
    t = None
    for a, b, x in zip(u, v, p):
        if a != b:
            t = (x - a) / (b - a)
            break
    if t is None or not (0 < t < 1):
        return False
    return all(x == a + t * (b - a) for a, b, x in zip(u, v, p))


def check_dvt(P, points):
    """Exact admissibility test.

    Returns
    -------
    (bool, vertex or None, str)
        Verdict, first offending vertex, and a reason.
    """
    inc = _vertex_edges(P)
    d = P.dim
    for key in (frozenset((P.vertices[i], P.vertices[j])) for i, j in P.edges()):
        if key not in points:
            return False, next(iter(key)), "edge without a point"
        u, v = tuple(key)
        if not _on_open_segment(frac_vector(points[key]), u, v):
            return False, u, "point not in the relative interior of its edge"
    for v in P.vertices:
        pts = [frac_vector(points[key]) for key, _ in inc[v]]
        if affine_rank(pts) != d - 1:
            return False, v, "edge points at the vertex are not coplanar"
        h = _cut_through(pts, v)
        if affine_value(h, v) >= 0:
            return False, v, "cut does not separate the vertex"
        for u in P.vertices:
            if u != v and affine_value(h, u) <= 0:
                return False, v, "cut removes another vertex"
    return True, None, ""


def dvt_admissible(P, points):
    """True iff the edge points define a deep vertex truncation of ``P``."""
    return check_dvt(P, points)[0]


def _state_from_points(P, points):
    inc = _vertex_edges(P)
    cuts = {}
    for v in P.vertices:
        cuts[v] = _cut_through([points[key] for key, _ in inc[v]], v)
    return DVTState(P, cuts, dict(points))


def midpoint_state(P):
    """Truncation data from edge midpoints (admissible for regular polytopes)."""
    points = {}
    for i, j in P.edges():
        u, v = P.vertices[i], P.vertices[j]
        points[frozenset((u, v))] = tuple((a + b) / 2 for a, b in zip(u, v))
    ok, v, why = check_dvt(P, points)
    if not ok:
        raise AdmissibilityError(f"midpoints not admissible at {v}: {why}", vertex=v)
    return _state_from_points(P, points)


def dvt(state):
    """``DVT(P)``: the hull of the edge points, after checking admissibility."""
    ok, v, why = check_dvt(state.polytope, state.points)
    if not ok:
        raise AdmissibilityError(f"vertex {v}: {why}", vertex=v)
    return hull(state.points.values())


def stack_step(state, facet_index, max_halvings=200):
    """Stack a pyramid onto facet ``facet_index`` and extend the truncation data.

    The apex is ``w = b + lam * u`` where ``b`` is the barycenter of the
    facet ``DVT(F)`` and ``u`` the outer normal of ``F``.  ``lam`` is the
    midpoint of the open interval on which ``w`` is beyond ``DVT(F)`` and
    beneath every other facet of ``DVT(P)``; it is halved until the new
    cut removes only ``w``.

    Returns
    -------
    new_state : DVTState
    info : dict
        ``lam``, ``apex`` and the beyond-facet checks.
    """
    P = state.polytope
    if not P.is_simplicial():
        raise DomainError("stacking needs a simplicial polytope here")
    a = P.inequalities[facet_index]
    F = [P.vertices[i] for i in sorted(P.incidences[facet_index])]
    D = dvt(state)
    try:
        j = D.inequalities.index(a)
    except ValueError:
        raise ConstructionError("DVT(F) is not a facet of DVT(P)") from None
    facet_pts = [D.vertices[i] for i in D.incidences[j]]
    m = len(facet_pts)
    b = tuple(sum(p[k] for p in facet_pts) / m for k in range(P.dim))
    u = tuple(Fraction(-x) for x in a[1:])

    lam_max = None
    for k, g in enumerate(D.inequalities):
        if k == j:
            continue
        slope = dot(g[1:], u)
        if slope < 0:
            bound = affine_value(g, b) / -slope
            lam_max = bound if lam_max is None else min(lam_max, bound)
    lam = Fraction(1) if lam_max is None else lam_max / 2

    for _ in range(max_halvings):
        w = tuple(bk + lam * uk for bk, uk in zip(b, u))
        new_points = dict(state.points)
        ps = []
        for v in F:
            h = state.cuts[v]
            hv, hw = affine_value(h, v), affine_value(h, w)
            t = -hv / (hw - hv)
            p = tuple(x + t * (y - x) for x, y in zip(v, w))
            new_points[frozenset((v, w))] = p
            ps.append(p)
        Q = hull(list(P.vertices) + [w])
        if Q.n_vertices == P.n_vertices + 1 and dvt_admissible(Q, new_points):
            new_state = _state_from_points(Q, new_points)
            info = {
                "lam": lam,
                "apex": w,
                "beyond_P": beyond_facets(w, P),
                "beyond_DVT": beyond_facets(w, D),
                "facet_P": facet_index,
                "facet_DVT": j,
            }
            return new_state, info
        lam /= 2
    raise ConstructionError("no admissible apex found")


def stacked_polytope(d, choices):
    """Stacked polytope ``Stack(n, d)`` with maintained truncation data.

    Parameters
    ----------
    d : int
        Dimension, at least 3.
    choices : sequence of int
        Facet index (into the current canonical facet order) for each
        stacking step; its length is ``n``.

    Returns
    -------
    (ExactPolytope, DVTState)
    """
    if d < 3:
        raise DomainError("stacked polytopes here need d >= 3")
    state = midpoint_state(hull(simplex_vertices(d)))
    for c in choices:
        P = state.polytope
        if not 0 <= c < P.n_facets:
            raise DomainError(f"facet choice {c} out of range 0..{P.n_facets - 1}")
        state, _ = stack_step(state, c)
    return state.polytope, state
