"""Planar maps given by rotation systems, their duals, and the quad graph.

A rotation system lists, for each vertex, its neighbours in counterclockwise
order.  Faces are traced by the rule "after the half-edge u -> v, continue
with v -> w where w precedes u in the rotation at v"; this walks each face
counterclockwise with the face on the left.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import pi

import networkx as nx

from ._linalg import dot
from .errors import ConnectivityError, GenusError, ParseError

__all__ = [
    "PlanarMap",
    "faces_from_rotation",
    "dual_map",
    "is_3_connected",
    "QuadGraph",
    "Kite",
    "build_quad_graph",
    "expansion_check",
    "parse_graph",
    "format_graph",
    "platonic_maps",
    "prism_map",
    "random_polytope_map",
]


@dataclass(frozen=True)
class PlanarMap:
    """Rotation system on vertices ``0..n-1``.

    Parameters
    ----------
    rotation : sequence of sequences of int
        ``rotation[v]`` lists the neighbours of ``v`` counterclockwise.
    """

    rotation: tuple

    def __post_init__(self):
        rot = tuple(tuple(int(u) for u in r) for r in self.rotation)
        object.__setattr__(self, "rotation", rot)
        n = len(rot)
        for v, r in enumerate(rot):
            if len(set(r)) != len(r):
                raise ValueError(f"vertex {v} lists a neighbour twice")
            for u in r:
                if not 0 <= u < n or u == v:
                    raise ValueError(f"vertex {v} has invalid neighbour {u}")
                if v not in rot[u]:
                    raise ValueError(f"edge {v}-{u} is not listed at {u}")

    @property
    def n_vertices(self):
        return len(self.rotation)

    @cached_property
    def edges(self):
        return tuple(sorted((u, v) for u, r in enumerate(self.rotation) for v in r if u < v))

    @property
    def n_edges(self):
        return len(self.edges)

    @cached_property
    def faces(self):
        return faces_from_rotation(self)

    @cached_property
    def half_edge_face(self):
        """``(u, v) -> index of the face to the left of u -> v``."""
        out = {}
        for k, face in enumerate(self.faces):
            for a, b in zip(face, face[1:] + face[:1]):
                out[(a, b)] = k
        return out

    def degree(self, v):
        return len(self.rotation[v])

    def graph(self):
        g = nx.Graph()
        g.add_nodes_from(range(self.n_vertices))
        g.add_edges_from(self.edges)
        return g

    def f_vector(self):
        return (self.n_vertices, self.n_edges, len(self.faces))

    @classmethod
    def from_polytope(cls, P):
        """Rotation system of the graph of a 3-dimensional ExactPolytope.

        Rotations are counterclockwise as seen from outside.
        """
        if P.dim != 3:
            raise ValueError("need a 3-polytope")
        vf = P.vertex_facets
        adj = {v: set() for v in range(P.n_vertices)}
        for u, v in combinations(range(P.n_vertices), 2):
            if len(vf[u] & vf[v]) >= 2:
                adj[u].add(v)
                adj[v].add(u)
        # a facet walked u -> v -> w means u follows w in the rotation at v
        succ = {}
        for a, F in zip(P.inequalities, P.incidences):
            cyc = _facet_cycle(P, a, F, adj)
            for i in range(len(cyc)):
                u, v, w = cyc[i - 1], cyc[i], cyc[(i + 1) % len(cyc)]
                succ.setdefault(v, {})[w] = u
        rotation = []
        for v in range(P.n_vertices):
            start = min(adj[v])
            order = [start]
            while True:
                nxt = succ[v][order[-1]]
                if nxt == start:
                    break
                order.append(nxt)
            rotation.append(tuple(order))
        return cls(tuple(rotation))


def _facet_cycle(P, a, F, adj):
    verts = sorted(F)
    start = verts[0]
    cyc = [start]
    prev = None
    cur = start
    inF = set(F)
    while True:
        nxt = min(u for u in adj[cur] if u in inF and u != prev)
        if nxt == start:
            break
        cyc.append(nxt)
        prev, cur = cur, nxt
        if len(cyc) > len(verts):
            raise ValueError("facet boundary is not a cycle")
    # orient counterclockwise seen from outside: outward normal is -a[1:]
    p, q, s = (P.vertices[i] for i in cyc[:3])
    u1 = [y - x for x, y in zip(p, q)]
    u2 = [y - x for x, y in zip(q, s)]
    cross = (
        u1[1] * u2[2] - u1[2] * u2[1],
        u1[2] * u2[0] - u1[0] * u2[2],
        u1[0] * u2[1] - u1[1] * u2[0],
    )
    if dot(cross, [-x for x in a[1:]]) < 0:
        cyc = [cyc[0]] + cyc[1:][::-1]
    return cyc


def faces_from_rotation(m):
    """Face cycles of a rotation system.

    Raises
    ------
    GenusError
        If ``V - E + F != 2`` or the graph is disconnected.
    """
    rot = m.rotation
    pos = [{u: i for i, u in enumerate(r)} for r in rot]
    seen = set()
    faces = []
    for u in range(len(rot)):
        for v in rot[u]:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                r = rot[b]
                w = r[(pos[b][a] - 1) % len(r)]
                a, b = b, w
            faces.append(face)
    g = nx.Graph()
    g.add_nodes_from(range(len(rot)))
    g.add_edges_from((u, v) for u in range(len(rot)) for v in rot[u])
    if len(rot) == 0 or not nx.is_connected(g):
        raise GenusError("rotation system is not connected")
    chi = len(rot) - g.number_of_edges() + len(faces)
    if chi != 2:
        raise GenusError(f"Euler characteristic {chi} != 2; rotation system is not planar")
    out = []
    for f in faces:
        k = f.index(min(f))
        out.append(f[k:] + f[:k])
    return tuple(tuple(f) for f in out)


def dual_map(m):
    """Dual rotation system; dual vertex ``k`` is face ``k`` of ``m``."""
    hef = m.half_edge_face
    rot = []
    for face in m.faces:
        nb = []
        for a, b in zip(face, face[1:] + face[:1]):
            nb.append(hef[(b, a)])
        rot.append(tuple(nb))
    return PlanarMap(tuple(rot))


def is_3_connected(m):
    """Exhaustive test: at least 4 vertices and no separating pair."""
    g = m.graph() if isinstance(m, PlanarMap) else nx.Graph(m)
    n = g.number_of_nodes()
    if n < 4 or not nx.is_connected(g):
        return False
    for a, b in combinations(list(g.nodes), 2):
        h = g.copy()
        h.remove_nodes_from((a, b))
        if not nx.is_connected(h):
            return False
    return True


def maps_isomorphic(m1, m2):
    """Graph isomorphism of the underlying graphs with equal face-size multisets."""
    if sorted(map(len, m1.faces)) != sorted(map(len, m2.faces)):
        return False
    return nx.is_isomorphic(m1.graph(), m2.graph())


# ---------------------------------------------------------------------------
# quad graph

@dataclass(frozen=True)
class Kite:
    """Vertex-face incidence ``(white i, black j)`` with its two tangency edges."""

    white: int
    black: int
    corners: tuple


@dataclass(frozen=True)
class QuadGraph:
    """Restricted quad graph for the edge ``f`` sent to infinity.

    Attributes
    ----------
    nodes : tuple
        ``("v", vertex)`` (white) and ``("f", face index)`` (black) for the
        index set ``I0``.
    kites : tuple of Kite
        Indices refer to ``nodes``.
    half_edges : tuple of (int, tuple)
        Node index and the removed element it is incident to.
    boundary : tuple of bool
    phi_units : tuple of int
        Target angle ``Phi_i`` in units of pi (1 on the boundary, 2 inside).
    """

    map: PlanarMap
    f: tuple
    removed_faces: tuple
    nodes: tuple
    kites: tuple
    half_edges: tuple
    boundary: tuple
    phi_units: tuple

    @property
    def n(self):
        return len(self.nodes)

    @cached_property
    def index(self):
        return {v: i for i, v in enumerate(self.nodes)}

    @property
    def Phi(self):
        return tuple(pi * u for u in self.phi_units)

    @cached_property
    def neighbors(self):
        out = [[] for _ in self.nodes]
        for k, K in enumerate(self.kites):
            out[K.white].append((K.black, k))
            out[K.black].append((K.white, k))
        return tuple(tuple(x) for x in out)

    def diagonal_edges(self):
        """Edges of the reduced diagonal graph: kites as pairs, half-edges as singletons."""
        return [(K.white, K.black) for K in self.kites] + [(i,) for i, _ in self.half_edges]


def build_quad_graph(m, f=None, check=True):
    """Restricted quad graph of a 3-connected planar map.

    Parameters
    ----------
    m : PlanarMap
    f : pair of int, optional
        Edge sent to infinity; defaults to the lexicographically first edge.
    """
    if check and not is_3_connected(m):
        raise ConnectivityError("planar map is not 3-connected")
    if f is None:
        f = m.edges[0]
    u0, u1 = f
    if (u0, u1) not in m.half_edge_face:
        raise ValueError(f"{f} is not an edge")
    hef = m.half_edge_face
    phi0, phi1 = hef[(u0, u1)], hef[(u1, u0)]
    nodes = [("v", v) for v in range(m.n_vertices) if v not in (u0, u1)]
    nodes += [("f", k) for k in range(len(m.faces)) if k not in (phi0, phi1)]
    index = {v: i for i, v in enumerate(nodes)}
    kites, halves = [], []
    for k, face in enumerate(m.faces):
        L = len(face)
        for p, v in enumerate(face):
            a, b = face[p - 1], face[(p + 1) % L]
            vi, fi = index.get(("v", v)), index.get(("f", k))
            if vi is not None and fi is not None:
                corners = (tuple(sorted((a, v))), tuple(sorted((v, b))))
                kites.append(Kite(vi, fi, corners))
            elif vi is not None:
                halves.append((vi, ("f", k)))
            elif fi is not None:
                halves.append((fi, ("v", v)))
    boundary = [False] * len(nodes)
    for i, _ in halves:
        boundary[i] = True
    units = tuple(1 if b else 2 for b in boundary)
    return QuadGraph(
        m, (u0, u1), (phi0, phi1), tuple(nodes), tuple(kites), tuple(halves),
        tuple(boundary), units,
    )


def expansion_check(q, V1):
    """``|E'_1| >= 2 |V'_1|`` where ``E'_1`` are the reduced diagonal edges meeting ``V1``."""
    V1 = set(V1)
    E1 = [e for e in q.diagonal_edges() if any(i in V1 for i in e)]
    return len(E1) >= 2 * len(V1)


def expansion_count(q, V1):
    V1 = set(V1)
    return sum(1 for e in q.diagonal_edges() if any(i in V1 for i in e))


# ---------------------------------------------------------------------------
# text format

def parse_graph(text):
    """Parse the rotation-system format.

    One line per vertex, ``v: n1 n2 ...`` listing neighbours counterclockwise.
    The ``v:`` label is optional (then vertices are numbered by line order).
    Blank lines and ``#`` comments are ignored.
    """
    rows = {}
    order = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            head, rest = line.split(":", 1)
            try:
                v = int(head)
            except ValueError:
                raise ParseError(f"bad vertex label {head!r}", lineno) from None
        else:
            v, rest = order, line
        try:
            nbrs = tuple(int(x) for x in rest.replace(",", " ").split())
        except ValueError:
            raise ParseError("neighbours must be integers", lineno) from None
        if v in rows:
            raise ParseError(f"vertex {v} listed twice", lineno)
        rows[v] = (nbrs, lineno)
        order += 1
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise ParseError("vertices must be numbered 0..n-1")
    for v, (nbrs, lineno) in rows.items():
        for u in nbrs:
            if u not in rows:
                raise ParseError(f"unknown neighbour {u}", lineno)
            if v not in rows[u][0]:
                raise ParseError(f"edge {v}-{u} missing at vertex {u}", lineno)
    try:
        return PlanarMap(tuple(rows[v][0] for v in range(n)))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def format_graph(m):
    return "".join(f"{v}: {' '.join(map(str, r))}\n" for v, r in enumerate(m.rotation))


# ---------------------------------------------------------------------------
# test corpus

def _map_from_points(points):
    from .geometry import hull

    return PlanarMap.from_polytope(hull(points))


def platonic_maps():
    """The five platonic graphs with planar rotation systems (from exact hulls)."""
    F = Fraction
    tetra = [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]
    cube = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    octa = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    g = F(8, 5)  # rational stand-in for the golden ratio; combinatorics unchanged
    ico = []
    for s1 in (1, -1):
        for s2 in (g, -g):
            ico += [(0, s1, s2), (s1, s2, 0), (s2, 0, s1)]
    icosa = _map_from_points(ico)
    return {
        "tetrahedron": _map_from_points(tetra),
        "cube": _map_from_points(cube),
        "octahedron": _map_from_points(octa),
        "icosahedron": icosa,
        "dodecahedron": dual_map(icosa),
    }


def prism_map(k):
    """Rotation system of the k-gon prism."""
    rot = []
    for i in range(k):
        rot.append(((i + 1) % k, i + k, (i - 1) % k))
    for i in range(k):
        rot.append(((i - 1) % k + k, i, (i + 1) % k + k))
    return PlanarMap(tuple(rot))


def random_polytope_map(rng, max_vertices=14, box=8):
    """Random 3-connected planar map from the exact hull of random lattice points.

    With probability one half the dual is returned instead.  Graphs of
    3-polytopes are 3-connected planar, so the result always qualifies.
    """
    from .geometry import hull

    while True:
        k = int(rng.integers(5, max_vertices + 4))
        pts = set()
        while len(pts) < k:
            p = tuple(int(x) for x in rng.integers(-box, box + 1, size=3))
            if (box * box) // 2 <= sum(x * x for x in p) <= box * box:
                pts.add(p)
        try:
            P = hull(pts)
        except ValueError:
            continue
        m = PlanarMap.from_polytope(P)
        if rng.random() < 0.5:
            m = dual_map(m)
        if 4 <= m.n_vertices <= max_vertices:
            return m


def faces_as_sets(m):
    return sorted(tuple(sorted(f)) for f in m.faces)

