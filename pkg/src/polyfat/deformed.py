"""Deformed products of polygons and their projections to R^4.

The inequality system ``A x <= rhs`` is block lower triangular: block row
``k`` (0-based) has the polygon block ``V`` on the diagonal, ``W`` in block
column ``k - 1`` and ``U`` in block column ``k - 2``.  Within every block,
rows alternate between "type 1" (even index: V near (1, 0), W = (0, 1),
U = (c, d)) and "type 2" (odd index: V near (0, 0), W = (a, b),
U = (e, f)).  The parameters a..f are chosen so that, with the weights

    alpha_k = (2^(k-t) - 1)^2,   beta_k = (2^(k-t) - 1)(2^(k-t) - 3/2),

the type-1 and type-2 rows of all blocks ``k != t`` sum to zero on the first
``2r - 4`` coordinates.  That positive dependence is what makes every
polygon 2-face survive the projection to the last four coordinates.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import atan2, pi, tan

from ._linalg import row_reduce, solve
from .analysis4d import fatness
from .errors import ConstructionError, DomainError
from .fvectors import FVector
from .geometry import ExactPolytope, hull, positively_spans, vertex_enumeration

__all__ = [
    "PolygonH",
    "ngon_hrep",
    "solve_block_params",
    "block_weights",
    "weighted_row_residual",
    "DeformedProductSpec",
    "assemble",
    "orthogonal_product",
    "deformed_interval_square",
    "deformed_cube",
    "build_deformed_product",
    "verify_product_combinatorics",
    "verify_survival",
    "product_vertices",
    "f_projected_product",
    "project_and_measure",
]


class Verdict:
    """Boolean verification result with the first counterexample."""

    def __init__(self, ok, counterexample=None, detail=""):
        self.ok = bool(ok)
        self.counterexample = counterexample
        self.detail = detail

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return "Verdict(True)"
        return f"Verdict(False, {self.counterexample!r}, {self.detail!r})"


# ---------------------------------------------------------------------------
# polygons

@dataclass(frozen=True)
class PolygonH:
    """Polygon ``{x : V x <= b}`` with rows in cyclic order."""

    V: tuple
    b: tuple

    @property
    def n(self):
        return len(self.V)

    def homogeneous(self):
        return [(bi, -v[0], -v[1]) for v, bi in zip(self.V, self.b)]

    def vertices(self):
        """Vertices with their tight row pairs, via exact vertex enumeration."""
        P, tight = vertex_enumeration(self.homogeneous(), return_tight=True)
        return list(zip(P.vertices, tight))


def _circle_point(t):
    # rational point on the unit circle, angle 2*arctan(t)
    t = Fraction(t)
    den = 1 + t * t
    return ((1 - t * t) / den, 2 * t / den)


def ngon_hrep(n, max_den=1000):
    """Near-regular n-gon with rational unit normals and ``b = 1``.

    The normals are rational points of the unit circle close to the regular
    directions, so each of the n tangent lines carries an edge.
    """
    if n < 3:
        raise DomainError("polygon needs n >= 3")
    V = []
    for k in range(n):
        theta = 2 * pi * k / n
        if abs(theta - pi) < 1e-12:
            V.append((Fraction(-1), Fraction(0)))
            continue
        half = theta / 2
        if half > pi / 2:
            half -= pi
        t = Fraction(tan(half)).limit_denominator(max_den)
        V.append(_circle_point(t))
    V.sort(key=lambda v: atan2(float(v[1]), float(v[0])) % (2 * pi))
    poly = PolygonH(tuple(V), tuple(Fraction(1) for _ in range(n)))
    if len(poly.vertices()) != n:
        raise ConstructionError(f"{n}-gon construction lost an edge")
    return poly


# ---------------------------------------------------------------------------
# block parameters

def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_scale(p, s):
    # p(s x)
    return [c * Fraction(s) ** k for k, c in enumerate(p)]


_ALPHA = _poly_mul([Fraction(-1), Fraction(1)], [Fraction(-1), Fraction(1)])
_BETA = _poly_mul([Fraction(-1), Fraction(1)], [Fraction(-3, 2), Fraction(1)])


def block_weights(k, t):
    """``(alpha_k, beta_k)`` for block ``k`` with block ``t`` omitted."""
    x = Fraction(2) ** (k - t)
    return (x - 1) ** 2, (x - 1) * (x - Fraction(3, 2))


def solve_block_params(r=3):
    """Exact parameters ``(a, b, c, d, e, f)``.

    With ``x = 2^(j-t)``, column block ``j`` receives contributions from
    block rows ``j`` (V), ``j + 1`` (W) and ``j + 2`` (U).  Requiring the
    weighted sum to vanish identically in ``x`` gives, per coordinate, three
    equations (coefficients of 1, x, x^2) in three unknowns.
    """
    if r < 3:
        raise DomainError("block parameters are only needed for r >= 3")
    a1, b1 = _ALPHA, _BETA
    a2, b2 = _poly_scale(_ALPHA, 2), _poly_scale(_BETA, 2)
    a4, b4 = _poly_scale(_ALPHA, 4), _poly_scale(_BETA, 4)
    # first coordinate: alpha_j*1 + beta_j*0 + a*beta_{j+1} + c*alpha_{j+2} + e*beta_{j+2} = 0
    # second coordinate: alpha_{j+1}*1 + b*beta_{j+1} + d*alpha_{j+2} + f*beta_{j+2} = 0
    A = [[b2[p], a4[p], b4[p]] for p in range(3)]
    first = solve(A, [-a1[p] for p in range(3)])
    second = solve(A, [-a2[p] for p in range(3)])
    if first is None or second is None:
        raise ConstructionError("block parameter system is singular")
    a, c, e = first
    b, d, f = second
    return {"a": a, "b": b, "c": c, "d": d, "e": e, "f": f}


def _model_rows(r, params):
    """Unperturbed rows (type 1, type 2) per block on all 2r coordinates."""
    p = params
    rows = []
    for k in range(r):
        r1 = [Fraction(0)] * (2 * r)
        r2 = [Fraction(0)] * (2 * r)
        r1[2 * k] = Fraction(1)
        if k >= 1:
            r1[2 * k - 1] = Fraction(1)
            r2[2 * k - 2], r2[2 * k - 1] = p["a"], p["b"]
        if k >= 2:
            r1[2 * k - 4], r1[2 * k - 3] = p["c"], p["d"]
            r2[2 * k - 4], r2[2 * k - 3] = p["e"], p["f"]
        rows.append((r1, r2))
    return rows


def weighted_row_residual(r, params, t):
    """Weighted sum of model rows over blocks ``k != t``, first ``2r - 4`` coordinates."""
    m = 2 * r - 4
    total = [Fraction(0)] * m
    for k, (r1, r2) in enumerate(_model_rows(r, params)):
        if k == t:
            continue
        al, be = block_weights(k, t)
        for i in range(m):
            total[i] += al * r1[i] + be * r2[i]
    return tuple(total)


# ---------------------------------------------------------------------------
# the assembled system

@dataclass(frozen=True)
class DeformedProductSpec:
    """Block system ``A x <= rhs`` for a deformed product of r polygons.

    ``block_dim`` is 2 for polygons and 1 for intervals.
    """

    r: int
    n: int
    eps: Fraction
    M: Fraction
    params: dict
    matrix: tuple
    rhs: tuple
    block_dim: int = 2
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def dim(self):
        return self.block_dim * self.r

    def block_rows(self, k):
        return range(k * self.n, (k + 1) * self.n)

    def homogeneous(self):
        return [(b,) + tuple(-x for x in row) for row, b in zip(self.matrix, self.rhs)]

    def choices(self):
        """Per block, the tight row sets of the polygon's vertices."""
        if self.block_dim == 1:
            return [(i,) for i in range(self.n)]
        return [(i, (i + 1) % self.n) for i in range(self.n)]

    def polytope(self):
        """ExactPolytope assembled from the verified vertices and rows."""
        verts = [v for v, _ in product_vertices(self)]
        return ExactPolytope.from_data(verts, self.homogeneous())


def perturbed_polygon(n, eps):
    """Rows of ``V^eps`` and right-hand side ``b``.

    Rows ``0..n-2`` sit on rational points of the unit circle at parameters
    ``t_i = eps * (i + 1 - n/2)``; odd rows are scaled by ``eps`` (so they
    are close to the origin), and the last row is ``eps * (-1, 0)``.
    """
    V, b = [], []
    for i in range(n - 1):
        p = _circle_point(eps * (i + 1 - Fraction(n, 2)))
        if i % 2 == 0:
            V.append(p)
            b.append(Fraction(1))
        else:
            V.append((eps * p[0], eps * p[1]))
            b.append(eps)
    V.append((-eps, Fraction(0)))
    b.append(eps)
    return tuple(V), tuple(b)


def assemble(r, n, eps, M, params=None):
    """Assemble the block system for given ``eps`` and ``M``."""
    if n < 4 or n % 2:
        raise DomainError("n must be even and >= 4")
    if r < 2:
        raise DomainError("r must be >= 2")
    eps, M = Fraction(eps), Fraction(M)
    if params is None:
        params = solve_block_params(max(r, 3))
    p = params
    V, b = perturbed_polygon(n, eps)
    W = [(Fraction(0), Fraction(1)) if i % 2 == 0 else (p["a"], p["b"]) for i in range(n)]
    U = [(p["c"], p["d"]) if i % 2 == 0 else (p["e"], p["f"]) for i in range(n)]
    rows, rhs = [], []
    for k in range(r):
        for i in range(n):
            row = [Fraction(0)] * (2 * r)
            row[2 * k], row[2 * k + 1] = V[i]
            if k >= 1:
                row[2 * k - 2], row[2 * k - 1] = W[i]
            if k >= 2:
                row[2 * k - 4], row[2 * k - 3] = U[i]
            rows.append(tuple(row))
            rhs.append(M ** k * b[i])
    return DeformedProductSpec(r, n, eps, M, dict(params), tuple(rows), tuple(rhs))


def orthogonal_product(r, n):
    """Block-diagonal product of ``r`` copies of a near-regular n-gon."""
    poly = ngon_hrep(n)
    rows, rhs = [], []
    for k in range(r):
        for v, bi in zip(poly.V, poly.b):
            row = [Fraction(0)] * (2 * r)
            row[2 * k], row[2 * k + 1] = v
            rows.append(tuple(row))
            rhs.append(bi)
    return DeformedProductSpec(r, n, Fraction(0), Fraction(1), {}, tuple(rows), tuple(rhs))


def deformed_interval_square(a, b, M):
    """``0 <= x1 <= 1``, ``a x1 <= x2 <= M - b x1`` as a two-block interval system."""
    a, b, M = Fraction(a), Fraction(b), Fraction(M)
    rows = (
        (Fraction(-1), Fraction(0)),
        (Fraction(1), Fraction(0)),
        (a, Fraction(-1)),
        (b, Fraction(1)),
    )
    rhs = (Fraction(0), Fraction(1), Fraction(0), M)
    return DeformedProductSpec(2, 2, Fraction(0), M, {"a": a, "b": b}, rows, rhs, block_dim=1)


def deformed_cube(eps=Fraction(1, 4), M=Fraction(4)):
    """A deformed 3-cube whose projection to the last two coordinates keeps all 8 vertices.

    The x1-components of the normals in block 2 are positive and in block 3
    negative, so at every vertex the three tight normals have x1-components
    of both signs.
    """
    eps, M = Fraction(eps), Fraction(M)
    z, one = Fraction(0), Fraction(1)
    rows = (
        (-one, z, z), (one, z, z),
        (eps, -one, z), (eps, one, z),
        (-eps, z, -one), (-eps, z, one),
    )
    rhs = (z, one, z, M, z, M * M)
    return DeformedProductSpec(3, 2, eps, M, {}, rows, rhs, block_dim=1)


# ---------------------------------------------------------------------------
# verification

def _solve_choice(spec, choice):
    """Forward substitution through the blocks for one vertex choice."""
    m = spec.block_dim
    x = [Fraction(0)] * spec.dim
    tight = []
    for k, local in enumerate(choice):
        idx = [k * spec.n + i for i in local]
        tight.extend(idx)
        A = [[spec.matrix[i][m * k + c] for c in range(m)] for i in idx]
        rhs = []
        for i in idx:
            s = spec.rhs[i] - sum(spec.matrix[i][c] * x[c] for c in range(m * k))
            rhs.append(s)
        y = solve(A, rhs)
        if y is None:
            return None, tight
        x[m * k:m * k + m] = y
    return tuple(x), tight


def product_vertices(spec):
    """``[(vertex, tight row indices)]`` for every choice, or raise if any is singular."""
    if "vertices" in spec._cache:
        return spec._cache["vertices"]
    out = []
    for choice in product(spec.choices(), repeat=spec.r):
        x, tight = _solve_choice(spec, choice)
        if x is None:
            raise ConstructionError(f"singular block system for choice {choice}")
        out.append((x, tuple(tight)))
    spec._cache["vertices"] = out
    return out


def _slack(spec, x):
    return [b - sum(a * xi for a, xi in zip(row, x)) for row, b in zip(spec.matrix, spec.rhs)]


def verify_product_combinatorics(spec):
    """Exact check that ``A x <= rhs`` is combinatorially the product.

    Every choice of tight rows (one vertex of each block polygon) must give
    a point satisfying all other rows strictly.  Then all these points are
    simple vertices; the edge walk below checks that each of their edges
    ends in another such vertex, so by connectivity of the graph there are
    no further vertices.
    """
    m, dim = spec.block_dim, spec.dim
    table = {}
    for choice in product(spec.choices(), repeat=spec.r):
        x, tight = _solve_choice(spec, choice)
        if x is None:
            return Verdict(False, choice, "singular tight system")
        s = _slack(spec, x)
        tset = set(tight)
        for i, si in enumerate(s):
            if i in tset:
                continue
            if si <= 0:
                return Verdict(False, choice, f"row {i} not strictly satisfied")
        table[frozenset(tight)] = (x, tight, s)

    for T, (x, tight, s) in table.items():
        A = [list(spec.matrix[i]) for i in tight]
        aug = [A[i] + [Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
        R, piv = row_reduce(aug, 2 * dim)
        inv_cols = [[R[i][dim + j] for i in range(dim)] for j in range(dim)]
        for j, leave in enumerate(tight):
            delta = [-v for v in inv_cols[j]]  # A_T delta = -e_j
            best, enter = None, []
            for i, row in enumerate(spec.matrix):
                if i in T:
                    continue
                rate = sum(a * dl for a, dl in zip(row, delta))
                if rate > 0:
                    step = s[i] / rate
                    if best is None or step < best:
                        best, enter = step, [i]
                    elif step == best:
                        enter.append(i)
            if best is None:
                return Verdict(False, tuple(tight), "unbounded edge")
            if len(enter) != 1:
                return Verdict(False, tuple(tight), "degenerate edge")
            if (T - {leave}) | {enter[0]} not in table:
                return Verdict(False, tuple(tight), "edge leads to an unexpected vertex")
    expected = spec.n ** spec.r
    if len(table) != expected:
        return Verdict(False, None, f"{len(table)} vertices instead of {expected}")
    spec._cache.setdefault(
        "vertices", [(x, tuple(tight)) for x, tight, _ in table.values()]
    )
    return Verdict(True)


def verify_survival(spec):
    """Positive spanning of truncated tight rows for every omitted block."""
    r, m = spec.r, 2 * spec.r - 4
    if m <= 0:
        return Verdict(True)
    for t in range(r):
        others = [k for k in range(r) if k != t]
        for choice in product(spec.choices(), repeat=r - 1):
            vecs = []
            for k, local in zip(others, choice):
                for i in local:
                    vecs.append(spec.matrix[k * spec.n + i][:m])
            if not positively_spans(vecs, m):
                return Verdict(False, (t, choice), "truncated rows do not positively span")
    return Verdict(True)


def build_deformed_product(r, n, eps=Fraction(1, 4), M=Fraction(2), max_rounds=40):
    """Search ``eps`` (halving) and ``M`` (doubling) until both verifiers pass.

    Returns
    -------
    DeformedProductSpec
    """
    eps, M = Fraction(eps), Fraction(M)
    params = solve_block_params(max(r, 3))
    for _ in range(max_rounds):
        spec = assemble(r, n, eps, M, params)
        if not verify_survival(spec):
            eps /= 2
            continue
        break
    else:
        raise ConstructionError(f"survival check still failing at eps={eps}")
    for _ in range(max_rounds):
        spec = assemble(r, n, eps, M, params)
        verdict = verify_product_combinatorics(spec)
        if verdict:
            return spec
        M *= 2
    raise ConstructionError(
        f"product combinatorics still failing at eps={eps}, M={M}: {verdict!r}"
    )


def f_projected_product(r, n):
    """f-vector of the projection of the deformed product to R^4.

    With ``p = r n^(r-1)`` prism facets and ``c = (r-2) n^r / 4`` cube
    facets: ``f_3 = c + p`` and ``f_2 = f_3 + (r-1) n^r``.
    """
    if r < 2 or n < 4 or n % 2:
        raise DomainError("need r >= 2 and even n >= 4")
    N = n ** r
    p = r * n ** (r - 1)
    c4 = (r - 2) * N  # 4c
    if c4 % 4:
        raise DomainError("cube count is not integral")
    f3 = c4 // 4 + p
    f2 = f3 + (r - 1) * N
    return FVector((N, r * N, f2, f3))


def project_and_measure(spec):
    """Project to the last four coordinates and measure.

    Returns
    -------
    Q : ExactPolytope
    fvec : FVector
    fat : Fraction
    census : dict
        Facet counts keyed by ``(#vertices, #polygon 2-faces with > 4 vertices)``.
    """
    verts = [v[-4:] for v, _ in product_vertices(spec)]
    Q = hull(verts)
    fv = FVector(Q.f_vector())
    census = {}
    twofaces = [frozenset(g) for g in Q.lattice.faces(2)]
    for F in Q.incidences:
        big = sum(1 for g in twofaces if g <= F and len(g) > 4)
        key = (len(F), big)
        census[key] = census.get(key, 0) + 1
    return Q, fv, fatness(fv.entries), census
