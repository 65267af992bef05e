"""Realizations of 3-connected planar maps as 3-polytopes.

Two routes are provided: the circle-packing route, which lifts a
rectangular orthogonal circle pattern to the sphere and reads off an
edge-tangent polytope (floating point), and the Tutte-Maxwell route, which
draws the graph with the rubber band method and lifts it by an equilibrium
stress (exact rationals).
"""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._linalg import solve
from .errors import PreconditionError, RealizationError
from .geometry import combinatorially_equivalent, hull, polar
from .packing import layout_kites, solve_radii
from .planar import build_quad_graph, dual_map, is_3_connected

__all__ = [
    "SphericalPattern",
    "RealizedPolytope",
    "circle_to_plane",
    "line_to_plane",
    "circle_angle_cos",
    "inverse_stereographic",
    "spherical_residuals",
    "polytope_from_pattern",
    "realize_steinitz",
    "TutteDrawing",
    "tutte_embedding",
    "maxwell_lift",
    "tutte_realization",
]


# ---------------------------------------------------------------------------
# circles on the sphere

def _unit_plane(n, h):
    n = np.asarray(n, dtype=float)
    s = np.linalg.norm(n)
    n, h = n / s, h / s
    if h < 0:
        n, h = -n, -h
    return n, float(h)


def circle_to_plane(center, radius):
    """Plane ``n.X = h`` cutting out the image of a planar circle under
    inverse stereographic projection from the north pole."""
    c = np.asarray(center, dtype=float)
    q = float(c @ c) - radius * radius
    return _unit_plane((2 * c[0], 2 * c[1], q - 1), 1 + q)


def line_to_plane(a, b):
    """Plane for the image of the line ``a.p = b``; it passes through the pole."""
    return _unit_plane((a[0], a[1], b), b)


def circle_angle_cos(p1, p2):
    """Cosine of the intersection angle of two circles on the unit sphere.

    ``+-1`` means tangent, ``0`` orthogonal.
    """
    (n1, h1), (n2, h2) = p1, p2
    return (float(n1 @ n2) - h1 * h2) / np.sqrt((1 - h1 * h1) * (1 - h2 * h2))


@dataclass(frozen=True)
class SphericalPattern:
    """Facet circles (per face of G) and horizon circles (per vertex of G).

    Each circle is a pair ``(unit normal, offset)`` with ``0 <= offset < 1``.
    """

    map: object
    facets: dict
    horizons: dict
    scale: float = 1.0


def inverse_stereographic(pattern, scale=1.0, shift=(0.0, 0.0)):
    """Lift a rectangular pattern to the sphere.

    The pattern is first mapped by ``p -> scale * (p - shift)``, a
    similarity that acts on the sphere as a Moebius transformation fixing
    the pole.  The four boundary lines become circles through the pole,
    which is the tangency point of the edge sent to infinity.
    """
    q = pattern.q
    sh = np.asarray(shift, dtype=float)
    facets, horizons = {}, {}
    for i, node in enumerate(q.nodes):
        c = scale * (pattern.centers[i] - sh)
        plane = circle_to_plane(c, scale * pattern.radii[i])
        (facets if node[0] == "f" else horizons)[node[1]] = plane
    for (kind, label), val in pattern.lines.items():
        if kind == "f":
            plane = line_to_plane((0.0, 1.0), scale * (val - sh[1]))
            facets[label] = plane
        else:
            plane = line_to_plane((1.0, 0.0), scale * (val - sh[0]))
            horizons[label] = plane
    return SphericalPattern(q.map, facets, horizons, scale)


def spherical_residuals(sp):
    """Worst deviation from tangency (adjacent facet circles) and from
    orthogonality (facet and horizon circle at a shared tangency point)."""
    m = sp.map
    hef = m.half_edge_face
    tang, orth = 0.0, 0.0
    for u, v in m.edges:
        f1, f2 = hef[(u, v)], hef[(v, u)]
        c = circle_angle_cos(sp.facets[f1], sp.facets[f2])
        tang = max(tang, abs(abs(c) - 1))
        for w in (u, v):
            for f in (f1, f2):
                orth = max(orth, abs(circle_angle_cos(sp.facets[f], sp.horizons[w])))
    return float(tang), float(orth)


# ---------------------------------------------------------------------------
# edge-tangent polytope

@dataclass
class RealizedPolytope:
    """Floating-point 3-polytope labelled by the vertices and faces of a map.

    Attributes
    ----------
    vertices : ndarray, shape (n, 3)
    faces : tuple of tuple of int
        Face cycles of the map, one per facet.
    planes : list of (ndarray, float)
        Facet ``k`` is ``{x : n.x <= h}`` with ``n`` a unit vector.
    residuals : dict
    """

    vertices: np.ndarray
    faces: tuple
    planes: list
    residuals: dict = field(default_factory=dict)
    pattern: object = None

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def facet_vertex_sets(self):
        return tuple(frozenset(F) for F in self.faces)

    def edges(self):
        out = set()
        for F in self.faces:
            for a, b in zip(F, F[1:] + F[:1]):
                out.add((min(a, b), max(a, b)))
        return sorted(out)

    def f_vector(self):
        return (self.n_vertices, len(self.edges()), len(self.faces))


def edge_tangency(vertices, edges):
    """Worst ``| dist(0, line) - 1 |`` and the smallest interior margin of the foot point."""
    worst, margin = 0.0, np.inf
    for a, b in edges:
        p, q = vertices[a], vertices[b]
        d = q - p
        t = -float(p @ d) / float(d @ d)
        foot = p + t * d
        worst = max(worst, abs(float(np.linalg.norm(foot)) - 1))
        margin = min(margin, t, 1 - t)
    return worst, margin


def polytope_from_pattern(sp, tol=1e-7):
    """Polytope whose facet planes are the planes of the facet circles.

    Vertices are the poles ``n / h`` of the horizon planes.  The result is
    verified: each facet plane contains exactly its face's vertices (others
    strictly on one side) and every edge line touches the unit sphere at a
    point inside the edge.

    Raises
    ------
    RealizationError
        If any check fails.
    """
    m = sp.map
    nv = m.n_vertices
    V = np.empty((nv, 3))
    for v in range(nv):
        n, h = sp.horizons[v]
        if h < 1e-12:
            raise RealizationError(f"horizon circle of vertex {v} is a great circle")
        V[v] = n / h
    scale = max(1.0, float(np.max(np.linalg.norm(V, axis=1))))
    planes = []
    worst_plane, worst_side = 0.0, np.inf
    for k, face in enumerate(m.faces):
        n, h = sp.facets[k]
        vals = V @ n - h
        on = np.zeros(nv, dtype=bool)
        on[list(face)] = True
        worst_plane = max(worst_plane, float(np.max(np.abs(vals[on]))))
        off = vals[~on]
        if off.size and np.max(off) > 0:
            n, h, off = -n, -h, -off
        if off.size:
            worst_side = min(worst_side, float(-np.max(off)))
        planes.append((n, h))
    if worst_plane > tol * scale:
        raise RealizationError(f"face vertices are not coplanar (residual {worst_plane:.3e})")
    if worst_side <= tol * scale:
        raise RealizationError("a facet plane does not support the polytope")
    worst, margin = edge_tangency(V, m.edges)
    if worst > tol * scale:
        raise RealizationError(f"edge tangency residual {worst:.3e} exceeds tolerance")
    if margin <= 0:
        raise RealizationError("tangency point lies outside an edge")
    res = {"plane": worst_plane, "support": worst_side, "tangency": worst, "foot_margin": margin}
    return RealizedPolytope(V, m.faces, planes, res)


def _scales():
    yield 1.0
    for k in range(1, 41):
        yield 2.0 ** (k / 4)
        yield 2.0 ** (-k / 4)


def realize_steinitz(m, f=None, tol_grad=1e-12, tol=1e-7):
    """End-to-end circle-packing realization of a 3-connected planar map.

    The similarity applied before lifting is found by a scan over scale
    factors (the pattern stays centred at its rectangle centre); the first
    scale whose lift passes all checks is kept, ties broken by the
    smallest vertex norm.

    Returns
    -------
    RealizedPolytope
        ``residuals`` also records the solver gradient norm, the spherical
        tangency/orthogonality residuals and the chosen scale.
    """
    q = build_quad_graph(m, f)
    ra = solve_radii(q, tol=tol_grad)
    pattern = layout_kites(ra)
    best, best_norm, last = None, np.inf, None
    for s in _scales():
        sp = inverse_stereographic(pattern, scale=s)
        try:
            P = polytope_from_pattern(sp, tol=tol)
        except RealizationError as exc:
            last = exc
            if best is not None:
                break
            continue
        norm = float(np.max(np.linalg.norm(P.vertices, axis=1)))
        if norm < best_norm:
            tang, orth = spherical_residuals(sp)
            P.residuals.update(
                gradient=ra.residual, sphere_tangency=tang, sphere_orthogonality=orth,
                scale=s, closure=float(pattern.closure_error),
                iterations=len(ra.history) - 1,
            )
            P.pattern = pattern
            best, best_norm = P, norm
    if best is None:
        raise RealizationError(f"no normalization produced a valid lift: {last}")
    return best


# ---------------------------------------------------------------------------
# Tutte embedding and Maxwell-Cremona lift

@dataclass(frozen=True)
class TutteDrawing:
    """Exact straight-line drawing with a triangular outer face."""

    map: object
    positions: tuple
    outer_face: int


def _signed_area(pts):
    s = Fraction(0)
    for (x1, y1), (x2, y2) in zip(pts, pts[1:] + pts[:1]):
        s += x1 * y2 - x2 * y1
    return s / 2


def tutte_embedding(m, outer_face=None):
    """Rubber band drawing with the outer triangle at (0,0), (0,1), (1,0).

    Interior vertices sit at the mass centre of their neighbours; the
    linear system is solved exactly.

    Raises
    ------
    PreconditionError
        If the chosen outer face is not a triangle.
    RealizationError
        If the drawing is not a plane embedding (face orientation test).
    """
    faces = m.faces
    if outer_face is None:
        outer_face = next((k for k, F in enumerate(faces) if len(F) == 3), None)
        if outer_face is None:
            raise PreconditionError("no triangular face; use the dual map")
    if len(faces[outer_face]) != 3:
        raise PreconditionError("outer face must be a triangle")
    a, b, c = faces[outer_face]
    # the outer cycle runs clockwise in the drawing
    fixed = {a: (Fraction(0), Fraction(0)), b: (Fraction(0), Fraction(1)), c: (Fraction(1), Fraction(0))}
    inner = [v for v in range(m.n_vertices) if v not in fixed]
    idx = {v: i for i, v in enumerate(inner)}
    n = len(inner)
    A = [[Fraction(0)] * n for _ in range(n)]
    bx, by = [Fraction(0)] * n, [Fraction(0)] * n
    for v in inner:
        i = idx[v]
        A[i][i] = Fraction(m.degree(v))
        for u in m.rotation[v]:
            if u in fixed:
                bx[i] += fixed[u][0]
                by[i] += fixed[u][1]
            else:
                A[i][idx[u]] -= 1
    xs = solve(A, bx) if n else ()
    ys = solve(A, by) if n else ()
    if xs is None or ys is None:
        raise RealizationError("Tutte system is singular")
    pos = [None] * m.n_vertices
    for v, p in fixed.items():
        pos[v] = p
    for v in inner:
        pos[v] = (xs[idx[v]], ys[idx[v]])
    drawing = TutteDrawing(m, tuple(pos), outer_face)
    _check_plane(drawing)
    return drawing


def _check_plane(drawing):
    m, pos = drawing.map, drawing.positions
    total = Fraction(0)
    for k, F in enumerate(m.faces):
        if k == drawing.outer_face:
            continue
        pts = [pos[v] for v in F]
        area = _signed_area(pts)
        if area <= 0:
            raise RealizationError(f"face {k} is degenerate or inverted")
        n = len(pts)
        for i in range(n):
            (x0, y0), (x1, y1), (x2, y2) = pts[i - 1], pts[i], pts[(i + 1) % n]
            if (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1) <= 0:
                raise RealizationError(f"face {k} is not strictly convex")
        total += area
    outer = -_signed_area([pos[v] for v in m.faces[drawing.outer_face]])
    if total != outer:
        raise RealizationError("interior faces overlap")


def maxwell_lift(drawing):
    """Lift a Tutte drawing to a convex 3-polytope.

    Every edge not on the outer triangle carries stress 1, which is in
    equilibrium at the interior vertices.  Starting from one interior face
    at height 0, crossing the edge ``i -> j`` from the right face R to the
    left face L changes the affine height function by
    ``a_L - a_R = J (p_j - p_i)`` with ``J`` the quarter turn.

    Returns
    -------
    (ExactPolytope, dict)
        The hull of the lifted points and ``{"heights": ..., "height_range": ...}``.
    """
    m, pos = drawing.map, drawing.positions
    hef = m.half_edge_face
    outer = drawing.outer_face
    outer_edges = {tuple(sorted(e)) for e in zip(m.faces[outer], m.faces[outer][1:] + m.faces[outer][:1])}
    start = next(k for k in range(len(m.faces)) if k != outer)
    planes = {start: (Fraction(0), Fraction(0), Fraction(0))}
    stack = [start]
    while stack:
        R = stack.pop()
        face = m.faces[R]
        for a, b in zip(face, face[1:] + face[:1]):
            # R is to the left of a -> b, hence to the right of b -> a
            i, j = b, a
            if tuple(sorted((i, j))) in outer_edges:
                continue
            L = hef[(i, j)]
            dx = pos[j][0] - pos[i][0]
            dy = pos[j][1] - pos[i][1]
            ja = (-dy, dx)
            aR1, aR2, bR = planes[R]
            aL1, aL2 = aR1 + ja[0], aR2 + ja[1]
            bL = bR - (ja[0] * pos[i][0] + ja[1] * pos[i][1])
            new = (aL1, aL2, bL)
            if L in planes:
                if planes[L] != new:
                    raise RealizationError("stress is not in equilibrium")
            else:
                planes[L] = new
                stack.append(L)
    heights = [None] * m.n_vertices
    for k, F in enumerate(m.faces):
        if k == outer:
            continue
        a1, a2, b0 = planes[k]
        for v in F:
            z = a1 * pos[v][0] + a2 * pos[v][1] + b0
            if heights[v] is not None and heights[v] != z:
                raise RealizationError("inconsistent lift heights")
            heights[v] = z
    pts = [(pos[v][0], pos[v][1], heights[v]) for v in range(m.n_vertices)]
    P = hull(pts)
    info = {"heights": tuple(heights), "height_range": (min(heights), max(heights))}
    return P, info


def tutte_realization(m):
    """Exact Tutte-Maxwell realization, through the dual when ``m`` has no triangle.

    Returns
    -------
    (ExactPolytope, dict)

    Raises
    ------
    RealizationError
        If the result is not combinatorially equivalent to ``m``.
    """
    if not is_3_connected(m):
        raise PreconditionError("planar map is not 3-connected")
    if any(len(F) == 3 for F in m.faces):
        P, info = maxwell_lift(tutte_embedding(m))
        info["via_dual"] = False
    else:
        D = dual_map(m)
        if not any(len(F) == 3 for F in D.faces):
            raise RealizationError("neither the map nor its dual has a triangle")
        Q, info = maxwell_lift(tutte_embedding(D))
        P = polar(Q)
        info["via_dual"] = True
    if not combinatorially_equivalent(P, _MapFacets(m)):
        raise RealizationError("lifted polytope does not have the combinatorics of the map")
    return P, info


@dataclass(frozen=True)
class _MapFacets:
    map: object

    @property
    def n_vertices(self):
        return self.map.n_vertices

    @property
    def facet_vertex_sets(self):
        return tuple(frozenset(F) for F in self.map.faces)
