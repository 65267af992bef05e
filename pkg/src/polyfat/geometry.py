"""Exact polytope kernel.

Polytopes carry a V-representation (rational vertices) and an
H-representation in homogeneous form: a row ``(a0, a1, ..., ad)`` stands for
the inequality ``a0 + a1*x1 + ... + ad*xd >= 0``.  Rows are stored as
primitive integer vectors.  All decisions are made in exact arithmetic.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx

from ._dd import extreme_rays
from ._linalg import (
    affine_value,
    clear_denominators,
    dot,
    frac_vector,
    homogenize,
    integer_kernel_vector,
    rank,
)
from .errors import (
    IncidenceError,
    InfeasibleError,
    LowerDimensionalError,
    ResourceLimitError,
    UnboundedError,
)

__all__ = [
    "ExactPolytope",
    "FaceLattice",
    "hull",
    "vertex_enumeration",
    "face_lattice",
    "is_beyond",
    "is_beneath",
    "beyond_facets",
    "project_last",
    "positively_spans",
    "face_survives",
    "combinatorially_equivalent",
    "polar",
    "affine_restriction",
]


def _bits(x):
    i = 0
    while x:
        if x & 1:
            yield i
        x >>= 1
        i += 1


def _popcount(x):
    return bin(x).count("1")


@dataclass(frozen=True)
class FaceLattice:
    """Graded face lattice.

    ``ranks[k]`` lists the faces of dimension ``k - 1`` as sorted tuples of
    vertex indices, so ``ranks[0]`` holds only the empty face and
    ``ranks[-1]`` only the polytope itself.  ``covers[k]`` holds index pairs
    ``(i, j)`` meaning ``ranks[k][i]`` is a facet of ``ranks[k + 1][j]``.
    """

    ranks: tuple
    covers: tuple

    @property
    def dim(self):
        return len(self.ranks) - 2

    def faces(self, k):
        """Faces of dimension ``k``."""
        return self.ranks[k + 1]

    def f_vector(self):
        return tuple(len(self.ranks[k + 1]) for k in range(self.dim))

    def flag_count(self, i, j):
        """Number of incident pairs (i-face, j-face), ``i < j``."""
        big = [frozenset(g) for g in self.faces(j)]
        return sum(1 for f in self.faces(i) for g in big if set(f) <= g)

    def euler_characteristic(self):
        return sum((-1) ** i * fi for i, fi in enumerate(self.f_vector()))


@dataclass(frozen=True)
class ExactPolytope:
    """Full-dimensional bounded polytope with both representations.

    Attributes
    ----------
    dim : int
    vertices : tuple of tuple of Fraction
        Lexicographically sorted.
    inequalities : tuple of tuple of int
        Sorted primitive rows ``(a0, a)`` with ``a0 + a.x >= 0``.
    incidences : tuple of frozenset
        ``incidences[j]`` is the set of vertex indices on facet ``j``.
    """

    dim: int
    vertices: tuple
    inequalities: tuple
    incidences: tuple

    @classmethod
    def from_data(cls, vertices, inequalities):
        """Assemble from trusted vertices and facet rows (canonicalized here)."""
        verts = tuple(sorted(set(frac_vector(v) for v in vertices)))
        ineqs = tuple(sorted(set(clear_denominators(a) for a in inequalities)))
        inc = tuple(
            frozenset(i for i, v in enumerate(verts) if affine_value(a, v) == 0)
            for a in ineqs
        )
        return cls(len(verts[0]), verts, ineqs, inc)

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_facets(self):
        return len(self.inequalities)

    @property
    def facet_vertex_sets(self):
        return self.incidences

    @cached_property
    def vertex_facets(self):
        out = [set() for _ in self.vertices]
        for j, F in enumerate(self.incidences):
            for i in F:
                out[i].add(j)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def lattice(self):
        return face_lattice(self)

    def f_vector(self):
        return self.lattice.f_vector()

    def incidence_matrix(self):
        import numpy as np

        M = np.zeros((self.n_vertices, self.n_facets), dtype=bool)
        for j, F in enumerate(self.incidences):
            for i in F:
                M[i, j] = True
        return M

    def edges(self):
        """Vertex index pairs of the edges (from the face lattice)."""
        return [tuple(e) for e in self.lattice.faces(1)]

    def contains(self, point, strict=False):
        point = frac_vector(point)
        vals = [affine_value(a, point) for a in self.inequalities]
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)

    def is_simple(self):
        return all(len(s) == self.dim for s in self.vertex_facets)

    def is_simplicial(self):
        return all(len(F) == self.dim for F in self.incidences)

    def barycenter(self):
        n = len(self.vertices)
        return tuple(sum(v[k] for v in self.vertices) / n for k in range(self.dim))


# ---------------------------------------------------------------------------
# convex hull: beneath-beyond

def _facet_normal(H, idx_bits, extra, interior, d):
    rows = [H[i] for i in _bits(idx_bits)]
    if extra is not None:
        rows.append(H[extra])
    n = integer_kernel_vector(rows, d + 1)
    if n is None:
        return None
    if dot(n, interior) < 0:
        n = tuple(-x for x in n)
    return n


def hull(points):
    """Convex hull of a finite rational point set.

    Parameters
    ----------
    points : iterable of sequences
        Coordinates convertible to Fraction.

    Returns
    -------
    ExactPolytope

    Raises
    ------
    LowerDimensionalError
        If the points do not affinely span their ambient space.
    """
    pts = sorted(set(frac_vector(p) for p in points))
    if not pts:
        raise LowerDimensionalError(-1, 0)
    d = len(pts[0])
    H = [homogenize(p) for p in pts]

    basis = [0]
    for i in range(1, len(pts)):
        if rank([H[j] for j in basis] + [H[i]], d + 1) == len(basis) + 1:
            basis.append(i)
            if len(basis) == d + 1:
                break
    if len(basis) < d + 1:
        raise LowerDimensionalError(len(basis) - 1, d)

    c = [sum(pts[i][k] for i in basis) / (d + 1) for k in range(d)]
    interior = homogenize(c)

    # facets: list of [normal, bitset of point indices on it]
    facets = []
    all_basis = 0
    for i in basis:
        all_basis |= 1 << i
    for i in basis:
        bits = all_basis & ~(1 << i)
        facets.append([_facet_normal(H, bits, None, interior, d), bits])

    in_basis = set(basis)
    for q in range(len(pts)):
        if q in in_basis:
            continue
        hq = H[q]
        vals = [dot(F[0], hq) for F in facets]
        visible = [F for F, v in zip(facets, vals) if v < 0]
        if not visible:
            for F, v in zip(facets, vals):
                if v == 0:
                    F[1] |= 1 << q
            continue
        hidden = [(F, v) for F, v in zip(facets, vals) if v >= 0]
        qbit = 1 << q
        new = {}
        grow = []
        for F1 in visible:
            for F2, _ in hidden:
                S = F1[1] & F2[1]
                if _popcount(S) < d - 1:
                    continue
                count = 0
                for G in facets:
                    if G[1] & S == S:
                        count += 1
                        if count > 2:
                            break
                if count != 2:
                    continue
                n = _facet_normal(H, S, q, interior, d)
                if n == F2[0]:
                    grow.append(F2)
                    continue
                new[n] = new.get(n, 0) | S | qbit
        for F, v in hidden:
            if v == 0:
                F[1] |= qbit
        for F in grow:
            F[1] |= qbit
        facets = [F for F, _ in hidden] + [[n, b] for n, b in new.items()]

    # vertices: boundary points that are cut out by their facets alone
    on_facets = {}
    for j, (_, b) in enumerate(facets):
        for i in _bits(b):
            on_facets.setdefault(i, []).append(j)
    vert_idx = []
    for i, fs in sorted(on_facets.items()):
        common = ~0
        for j in fs:
            common &= facets[j][1]
        if common == 1 << i:
            vert_idx.append(i)
    vertices = [pts[i] for i in vert_idx]
    return ExactPolytope.from_data(vertices, [F[0] for F in facets])


def affine_restriction(points, drop):
    """Drop the listed coordinates (e.g. to restrict to a coordinate hyperplane)."""
    drop = set(drop)
    return [tuple(x for k, x in enumerate(p) if k not in drop) for p in points]


# ---------------------------------------------------------------------------
# H -> V

def _farkas_certificate(A):
    """Nonnegative y with y^T A[:,1:] = 0 and y . A[:,0] < 0, or None."""
    m = len(A)
    d = len(A[0]) - 1
    rows = []
    for i in range(m):
        rows.append(tuple(int(i == j) for j in range(m)))
    for k in range(1, d + 1):
        col = tuple(A[i][k] for i in range(m))
        rows.append(col)
        rows.append(tuple(-x for x in col))
    rays, _ = extreme_rays(rows, m)
    for y, _ in rays or ():
        if sum(yi * A[i][0] for i, yi in enumerate(y)) < 0:
            return y
    return None


def vertex_enumeration(inequalities, return_tight=False):
    """Vertices of ``{x : a0 + a.x >= 0}`` by double description.

    Parameters
    ----------
    inequalities : sequence of rows ``(a0, a1, ..., ad)``
    return_tight : bool
        Also return, per vertex of the result, the set of input row indices
        tight at it.

    Raises
    ------
    UnboundedError
        Carries a recession ray.
    InfeasibleError
        Carries a Farkas certificate.
    """
    A = [clear_denominators(a) for a in inequalities]
    d = len(A[0]) - 1
    rows = A + [tuple(int(k == 0) for k in range(d + 1))]
    rays, lin = extreme_rays(rows, d + 1)
    if rays is None:
        cert = _farkas_certificate(A)
        if cert is not None:
            raise InfeasibleError(cert)
        raise UnboundedError(lin[1:])
    points = [r for r, _ in rays if r[0] > 0]
    if not points:
        cert = _farkas_certificate(A)
        raise InfeasibleError(cert if cert is not None else ())
    for r, _ in rays:
        if r[0] == 0:
            raise UnboundedError(r[1:])
    verts = [tuple(Fraction(x, r[0]) for x in r[1:]) for r in points]
    P = hull(verts)
    if return_tight:
        tight = [
            frozenset(i for i, a in enumerate(A) if affine_value(a, v) == 0)
            for v in P.vertices
        ]
        return P, tight
    return P


# ---------------------------------------------------------------------------
# face lattice

def face_lattice(P):
    """All faces of ``P`` as intersections of facet vertex sets."""
    d = P.dim
    facets = [frozenset(F) for F in P.incidences]
    levels = [None] * (d + 2)
    levels[d + 1] = [frozenset(range(P.n_vertices))]
    levels[d] = sorted(set(facets), key=sorted)
    covers = [None] * (d + 1)
    covers[d] = [(i, 0) for i in range(len(levels[d]))]
    for k in range(d, 1, -1):
        below = {}
        pairs = []
        for j, G in enumerate(levels[k]):
            cands = {G & F for F in facets if not G <= F}
            cands.discard(frozenset())
            maximal = [S for S in cands if not any(S < T for T in cands)]
            for S in maximal:
                below.setdefault(S, []).append(j)
        order = sorted(below, key=sorted)
        index = {S: i for i, S in enumerate(order)}
        for S in order:
            for j in below[S]:
                pairs.append((index[S], j))
        levels[k - 1] = order
        covers[k - 1] = sorted(pairs)
    levels[0] = [frozenset()]
    covers[0] = [(0, j) for j in range(len(levels[1]))]
    ranks = tuple(tuple(tuple(sorted(S)) for S in lev) for lev in levels)
    return FaceLattice(ranks, tuple(tuple(c) for c in covers))


# ---------------------------------------------------------------------------
# predicates

def _facet_value(point, facet_index, P):
    v = affine_value(P.inequalities[facet_index], frac_vector(point))
    if v == 0:
        raise IncidenceError(f"point lies on the hyperplane of facet {facet_index}")
    return v


def is_beyond(point, facet_index, P):
    """True iff ``point`` strictly violates the given facet inequality."""
    return _facet_value(point, facet_index, P) < 0


def is_beneath(point, facet_index, P):
    """True iff ``point`` strictly satisfies the given facet inequality."""
    return _facet_value(point, facet_index, P) > 0


def beyond_facets(point, P):
    """Indices of facets the point lies beyond (on-hyperplane raises)."""
    return [j for j in range(P.n_facets) if is_beyond(point, j, P)]


def project_last(P, k):
    """Image of ``P`` under the coordinate projection to its last ``k`` coordinates."""
    if not 0 < k <= P.dim:
        raise ValueError("need 0 < k <= dim")
    return hull(v[P.dim - k:] for v in P.vertices)


def positively_spans(vectors, m):
    """Decide whether the vectors linearly span R^m with a strictly positive dependence.

    The dependence is found from the extreme rays of the pointed cone
    ``{lam >= 0 : sum lam_i v_i = 0}``: a strictly positive element exists iff
    the supports of the rays cover every index.
    """
    vectors = [frac_vector(v) for v in vectors]
    k = len(vectors)
    if m == 0:
        return True
    if k == 0 or rank(vectors, m) < m:
        return False
    rows = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    for c in range(m):
        col = tuple(v[c] for v in vectors)
        rows.append(col)
        rows.append(tuple(-x for x in col))
    rays, _ = extreme_rays(rows, k)
    support = 0
    for y, _ in rays:
        for i, yi in enumerate(y):
            if yi != 0:
                support |= 1 << i
    return support == (1 << k) - 1


def face_survives(G, P, k):
    """Whether face ``G`` (vertex indices) survives projection to the last ``k`` coordinates.

    The outer normals of the facets containing ``G``, restricted to the
    ``dim - k`` deleted coordinates, must positively span that space.
    """
    G = frozenset(G)
    if not G or len(G) == P.n_vertices:
        raise ValueError("G must be a nonempty proper face")
    m = P.dim - k
    normals = [a[1:1 + m] for a, F in zip(P.inequalities, P.incidences) if G <= F]
    if not normals:
        raise ValueError("G is not contained in any facet")
    return positively_spans(normals, m)


def _incidence_graph(P):
    g = nx.Graph()
    nv = P.n_vertices
    for i in range(nv):
        g.add_node(("v", i), side=0)
    for j, F in enumerate(P.facet_vertex_sets):
        g.add_node(("f", j), side=1)
        for i in F:
            g.add_edge(("v", i), ("f", j))
    return g


def combinatorially_equivalent(P, Q, max_nodes=20000):
    """Vertex-facet incidence isomorphism test.

    Accepts any objects with ``n_vertices`` and ``facet_vertex_sets``.

    Raises
    ------
    ResourceLimitError
        When vertices plus facets exceed ``max_nodes``.
    """
    if P.n_vertices != Q.n_vertices or len(P.facet_vertex_sets) != len(Q.facet_vertex_sets):
        return False
    size = P.n_vertices + len(P.facet_vertex_sets)
    if size > max_nodes:
        raise ResourceLimitError(
            f"incidence graph has {size} nodes; limit is {max_nodes}"
        )
    if sorted(map(len, P.facet_vertex_sets)) != sorted(map(len, Q.facet_vertex_sets)):
        return False
    gp, gq = _incidence_graph(P), _incidence_graph(Q)
    return nx.is_isomorphic(gp, gq, node_match=lambda a, b: a["side"] == b["side"])


def polar(P):
    """Polar of ``P`` after translating its vertex barycenter to the origin.

    Returns
    -------
    ExactPolytope
        Vertex ``j`` of the result corresponds to facet ``j`` of ``P``
        before canonical reordering; use the incidence structure, not
        indices, to compare.
    """
    c = P.barycenter()
    pts = []
    for a in P.inequalities:
        a0 = a[0] + sum(ai * ci for ai, ci in zip(a[1:], c))
        pts.append(tuple(Fraction(-ai) / a0 for ai in a[1:]))
    return hull(pts)


def lattice_is_dual(L1, L2):
    """Check that ``L2`` is isomorphic to the order dual of ``L1``.

    A face lattice is determined by its atom-coatom incidences, so it is
    enough to match the vertex-facet incidence graph of ``L1`` with that of
    ``L2`` with the two sides exchanged.
    """
    if L1.f_vector() != tuple(reversed(L2.f_vector())):
        return False

    def incidence(L, swap):
        g = nx.Graph()
        atoms, coatoms = L.ranks[1], L.ranks[-2]
        for i in range(len(atoms)):
            g.add_node(("a", i), side=int(swap))
        for j, F in enumerate(coatoms):
            g.add_node(("c", j), side=int(not swap))
            for i in F:
                g.add_edge(("a", i), ("c", j))
        return g

    return nx.is_isomorphic(incidence(L1, False), incidence(L2, True),
                            node_match=lambda a, b: a["side"] == b["side"])


def polymake_sections(P):
    """Homogeneous VERTICES and FACETS rows for serialization."""
    verts = [(Fraction(1),) + v for v in P.vertices]
    return {"VERTICES": verts, "FACETS": [tuple(Fraction(x) for x in a) for a in P.inequalities]}


def simplex_vertices(d):
    """``0, e_1, ..., e_d``."""
    zero = tuple(Fraction(0) for _ in range(d))
    out = [zero]
    for i in range(d):
        out.append(tuple(Fraction(int(k == i)) for k in range(d)))
    return out


def cube_vertices(d, lo=0, hi=1):
    from itertools import product

    return [tuple(Fraction(x) for x in p) for p in product((lo, hi), repeat=d)]


def cross_polytope_vertices(d):
    out = []
    for i in range(d):
        for s in (1, -1):
            out.append(tuple(Fraction(s * int(k == i)) for k in range(d)))
    return out


def edge_pairs(P):
    """Edges as frozensets of vertex indices."""
    return [frozenset(e) for e in P.edges()]

