"""Orthogonal circle patterns: angle systems by network flow, radii by
minimizing the BS functional, and the kite layout.

Angles are kept in units of pi as exact Fractions; radii are floats.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import pi

import numpy as np
from scipy import integrate

from .errors import ClosureError, ConvergenceError, StructuralError

__all__ = [
    "AngleSystem",
    "FlowNetwork",
    "coherent_angle_system",
    "max_flow",
    "f_aux",
    "f_aux_prime",
    "F_antideriv",
    "bs_value",
    "bs_gradient",
    "bs_hessian",
    "RadiiAssignment",
    "solve_radii",
    "CirclePattern",
    "layout_kites",
]


# ---------------------------------------------------------------------------
# max flow (Edmonds-Karp) over exact capacities

def max_flow(n_nodes, arcs, s, t):
    """Maximum s-t flow with exact arithmetic.

    Parameters
    ----------
    n_nodes : int
    arcs : list of (tail, head, capacity)
        ``capacity=None`` means unbounded.
    s, t : int

    Returns
    -------
    value : Fraction
    flows : list of Fraction
        Flow on each input arc.
    """
    INF = None
    head, cap, adj = [], [], [[] for _ in range(n_nodes)]
    for u, v, c in arcs:
        adj[u].append(len(head))
        head.append(v)
        cap.append(c)
        adj[v].append(len(head))
        head.append(u)
        cap.append(Fraction(0))

    def residual(e):
        return cap[e]

    value = Fraction(0)
    while True:
        parent = [-1] * n_nodes
        parent[s] = -2
        dq = deque([s])
        while dq and parent[t] == -1:
            u = dq.popleft()
            for e in adj[u]:
                c = residual(e)
                if (c is INF or c > 0) and parent[head[e]] == -1:
                    parent[head[e]] = e
                    dq.append(head[e])
        if parent[t] == -1:
            break
        # bottleneck
        push = None
        v = t
        while v != s:
            e = parent[v]
            c = cap[e]
            if c is not INF and (push is None or c < push):
                push = c
            v = head[e ^ 1]
        if push is None:
            raise StructuralError("unbounded augmenting path")
        v = t
        while v != s:
            e = parent[v]
            if cap[e] is not INF:
                cap[e] -= push
            if cap[e ^ 1] is not INF:
                cap[e ^ 1] += push
            v = head[e ^ 1]
        value += push
    flows = [cap[2 * k + 1] for k in range(len(arcs))]
    return value, flows


# ---------------------------------------------------------------------------
# coherent angle systems

@dataclass(frozen=True)
class FlowNetwork:
    """Two-layer network ``s -> V' -> E' -> t`` with lower/upper bounds (units of pi).

    ``arcs`` holds ``(tail, head, lower, upper)`` with ``upper=None`` for
    infinity; ``flow`` the feasible maximum flow found.
    """

    labels: tuple
    arcs: tuple
    flow: tuple

    def check(self):
        """Bounds and conservation, exactly."""
        n = len(self.labels)
        bal = [Fraction(0)] * n
        for (u, v, lo, up), x in zip(self.arcs, self.flow):
            if x < lo or (up is not None and x > up):
                return False
            bal[u] -= x
            bal[v] += x
        s, t = self.labels.index("s"), self.labels.index("t")
        return all(b == 0 for k, b in enumerate(bal) if k not in (s, t))


@dataclass(frozen=True)
class AngleSystem:
    """Kite angles ``phi[(i, k)]`` at node ``i`` of kite ``k``, in units of pi."""

    q: object
    units: dict
    network: FlowNetwork

    def angle(self, i, k):
        return float(self.units[(i, k)]) * pi

    def check(self):
        """Exact test of positivity, kite sums and node sums."""
        q = self.q
        node_sum = [Fraction(0)] * q.n
        for k, K in enumerate(q.kites):
            a, b = self.units[(K.white, k)], self.units[(K.black, k)]
            if a <= 0 or b <= 0 or a + b != Fraction(1, 2):
                return False
            node_sum[K.white] += 2 * a
            node_sum[K.black] += 2 * b
        return all(s == u for s, u in zip(node_sum, q.phi_units))


def coherent_angle_system(q):
    """Angle system from a feasible maximum flow.

    Each node distributes 2 (units of pi) to its incident edges of the
    reduced diagonal graph, every edge collects exactly 1, and every
    node-edge arc carries at least ``eps = 1/|arcs|``.  The lower bounds are
    removed by the usual shift, leaving a plain max-flow problem.

    Raises
    ------
    StructuralError
        If no such flow exists (input not 3-connected).
    """
    edges = [((K.white, K.black), ("kite", k)) for k, K in enumerate(q.kites)]
    edges += [((i,), ("half", h)) for h, (i, _) in enumerate(q.half_edges)]
    n_arcs_mid = sum(len(ends) for ends, _ in edges)
    eps = Fraction(1, n_arcs_mid)
    nV, nE = q.n, len(edges)
    s, t = nV + nE, nV + nE + 1
    deg = [0] * nV
    for ends, _ in edges:
        for i in ends:
            deg[i] += 1
    arcs, mid = [], []
    for i in range(nV):
        arcs.append((s, i, 2 - eps * deg[i]))
    for e, (ends, _) in enumerate(edges):
        for i in ends:
            mid.append((len(arcs), i, e))
            arcs.append((i, nV + e, None))
    for e, (ends, _) in enumerate(edges):
        arcs.append((nV + e, t, 1 - eps * len(ends)))
    value, flows = max_flow(nV + nE + 2, arcs, s, t)
    need = sum(c for u, _, c in arcs if u == s)
    if value != need:
        raise StructuralError("no coherent angle system: the flow cannot saturate the source")
    weight = {}
    for a, i, e in mid:
        weight[(i, e)] = eps + flows[a]
    units = {}
    for k, K in enumerate(q.kites):
        units[(K.white, k)] = weight[(K.white, k)] / 2
        units[(K.black, k)] = weight[(K.black, k)] / 2

    labels = tuple([f"v{i}" for i in range(nV)] + [f"e{e}" for e in range(nE)] + ["s", "t"])
    full_arcs, full_flow = [], []
    for i in range(nV):
        full_arcs.append((s, i, Fraction(2), Fraction(2)))
        full_flow.append(Fraction(2))
    for a, i, e in mid:
        full_arcs.append((i, nV + e, eps, None))
        full_flow.append(eps + flows[a])
    for e, (ends, _) in enumerate(edges):
        full_arcs.append((nV + e, t, Fraction(0), Fraction(1)))
        full_flow.append(Fraction(1))
    net = FlowNetwork(labels, tuple(full_arcs), tuple(full_flow))
    return AngleSystem(q, units, net)


# ---------------------------------------------------------------------------
# the functional

def f_aux(x):
    """``arctan(exp(x))``, evaluated stably as ``pi/4 + arctan(tanh(x/2))``."""
    return pi / 4 + np.arctan(np.tanh(np.asarray(x, dtype=float) / 2))


def f_aux_prime(x):
    """``1 / (2 cosh x)`` without overflow."""
    a = np.exp(-np.abs(np.asarray(x, dtype=float)))
    return a / (1 + a * a)


def F_antideriv(x):
    """``F(x) = integral of f from -inf to x`` by adaptive quadrature.

    For ``x > 0`` the identity ``F(x) = (pi/2) x + F(-x)`` keeps the
    integral over the exponentially decaying left tail only.
    """
    x = float(x)
    if x > 0:
        return pi / 2 * x + F_antideriv(-x)
    val, _ = integrate.quad(lambda s: float(f_aux(s)), -np.inf, x, epsabs=1e-14, epsrel=1e-13)
    return val


def _kite_pairs(q):
    I = np.array([K.white for K in q.kites], dtype=int)
    J = np.array([K.black for K in q.kites], dtype=int)
    return I, J


def bs_value(rho, q):
    rho = np.asarray(rho, dtype=float)
    I, J = _kite_pairs(q)
    total = 0.0
    for i, j in zip(I, J):
        d = rho[j] - rho[i]
        total += F_antideriv(d) + F_antideriv(-d) - pi / 2 * (rho[i] + rho[j])
    return total + float(np.dot(q.Phi, rho))


def bs_gradient(rho, q):
    """``Phi_i - sum_j 2 f(rho_j - rho_i)``."""
    rho = np.asarray(rho, dtype=float)
    I, J = _kite_pairs(q)
    g = np.array(q.Phi, dtype=float)
    d = rho[J] - rho[I]
    np.subtract.at(g, I, 2 * f_aux(d))
    np.subtract.at(g, J, 2 * f_aux(-d))
    return g


def bs_hessian(rho, q):
    """Weighted graph Laplacian with weights ``2 f'(rho_j - rho_i)``."""
    rho = np.asarray(rho, dtype=float)
    n = q.n
    I, J = _kite_pairs(q)
    w = 2 * f_aux_prime(rho[J] - rho[I])
    H = np.zeros((n, n))
    np.add.at(H, (I, I), w)
    np.add.at(H, (J, J), w)
    np.add.at(H, (I, J), -w)
    np.add.at(H, (J, I), -w)
    return H


@dataclass(frozen=True)
class RadiiAssignment:
    """Log radii normalized to sum zero, with the solver history."""

    q: object
    rho: np.ndarray
    history: tuple = field(default=())

    @property
    def radii(self):
        return np.exp(self.rho)

    @property
    def residual(self):
        return float(np.max(np.abs(bs_gradient(self.rho, self.q))))


def solve_radii(q, rho0=None, tol=1e-12, max_iter=100, check_angles=True):
    """Minimize the BS functional by damped, projected Newton steps.

    Parameters
    ----------
    q : QuadGraph
    rho0 : array, optional
        Starting point (default zero); it is projected onto ``sum = 0``.
    tol : float
        Target for the infinity norm of the gradient.

    Raises
    ------
    ConvergenceError
        If the tolerance is not reached within ``max_iter`` steps.
    """
    if check_angles:
        coherent_angle_system(q)
    n = q.n
    rho = np.zeros(n) if rho0 is None else np.array(rho0, dtype=float)
    rho = rho - rho.mean()
    g = bs_gradient(rho, q)
    gn = float(np.max(np.abs(g)))
    history = [gn]
    ones = np.full((n, n), 1.0 / n)
    for _ in range(max_iter):
        if gn <= tol:
            return RadiiAssignment(q, rho, tuple(history))
        H = bs_hessian(rho, q)
        dx = np.linalg.solve(H + ones, -g)
        dx -= dx.mean()
        step = 1.0
        while True:
            trial = rho + step * dx
            gt = bs_gradient(trial, q)
            gtn = float(np.max(np.abs(gt)))
            if gtn < gn or step < 1e-12:
                break
            step /= 2
        if gtn >= gn:
            # no further progress possible in double precision
            break
        rho, g, gn = trial - trial.mean(), gt, gtn
        history.append(gn)
    if gn <= tol:
        return RadiiAssignment(q, rho, tuple(history))
    raise ConvergenceError(
        f"gradient norm {gn:.3e} above tolerance {tol:.1e}", history
    )


# ---------------------------------------------------------------------------
# layout

@dataclass
class CirclePattern:
    """Laid-out rectangular pattern.

    Attributes
    ----------
    q : QuadGraph
    centers : ndarray, shape (n, 2)
    radii : ndarray, shape (n,)
    tangency : dict
        Edge of G (sorted pair) -> tangency point.
    kites : list of ndarray, shape (4, 2)
        Corners ``c_white, t_a, c_black, t_b`` per kite.
    lines : dict
        ``("f", phi0)``/``("f", phi1)`` -> y value of a horizontal line and
        ``("v", u0)``/``("v", u1)`` -> x value of a vertical line.
    rectangle : tuple
        ``(xmin, xmax, ymin, ymax)``.
    closure_error : float
    """

    q: object
    centers: np.ndarray
    radii: np.ndarray
    tangency: dict
    kites: list
    lines: dict
    rectangle: tuple
    closure_error: float

    def transformed(self, scale=1.0, shift=(0.0, 0.0), rotation=0.0):
        """Image under ``p -> scale * R(rotation) (p - shift)``."""
        c, s = np.cos(rotation), np.sin(rotation)
        R = np.array([[c, -s], [s, c]])
        sh = np.asarray(shift, dtype=float)

        def tr(p):
            return scale * (R @ (np.asarray(p) - sh))

        centers = np.array([tr(p) for p in self.centers])
        tang = {e: tr(p) for e, p in self.tangency.items()}
        kites = [np.array([tr(p) for p in K]) for K in self.kites]
        lines = {}
        if abs(rotation) < 1e-15:
            for key, val in self.lines.items():
                idx = 1 if key[0] == "f" else 0
                lines[key] = scale * (val - sh[idx])
        xmin, xmax, ymin, ymax = self.rectangle
        rect = (
            scale * (xmin - sh[0]), scale * (xmax - sh[0]),
            scale * (ymin - sh[1]), scale * (ymax - sh[1]),
        )
        return CirclePattern(self.q, centers, scale * self.radii, tang, kites, lines, rect,
                             self.closure_error)

    def kite_area(self):
        return float(sum(self.radii[K.white] * self.radii[K.black] for K in self.q.kites))

    def rectangle_area(self):
        xmin, xmax, ymin, ymax = self.rectangle
        return (xmax - xmin) * (ymax - ymin)

    def to_svg(self, size=600):
        xmin, xmax, ymin, ymax = self.rectangle
        w, h = xmax - xmin, ymax - ymin
        pad = 0.05 * max(w, h)
        s = size / (max(w, h) + 2 * pad)

        def X(x):
            return (x - xmin + pad) * s

        def Y(y):
            return (ymax - y + pad) * s

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{(w + 2 * pad) * s:.1f}" '
            f'height="{(h + 2 * pad) * s:.1f}">',
            f'<rect x="{X(xmin):.4f}" y="{Y(ymax):.4f}" width="{w * s:.4f}" '
            f'height="{h * s:.4f}" fill="none" stroke="black"/>',
        ]
        for i, (c, r) in enumerate(zip(self.centers, self.radii)):
            color = "steelblue" if self.q.nodes[i][0] == "v" else "darkred"
            out.append(
                f'<circle cx="{X(c[0]):.4f}" cy="{Y(c[1]):.4f}" r="{r * s:.4f}" '
                f'fill="none" stroke="{color}"/>'
            )
        for K in self.kites:
            pts = " ".join(f"{X(p[0]):.4f},{Y(p[1]):.4f}" for p in K)
            out.append(f'<polygon points="{pts}" fill="none" stroke="gray" stroke-width="0.5"/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _reflect(p, a, b):
    d = b - a
    d = d / np.linalg.norm(d)
    v = p - a
    return a + 2 * np.dot(v, d) * d - v


def layout_kites(ra, tol=1e-9):
    """Breadth-first placement of right-angled kites.

    The first kite is placed with its white center at the origin.  Each
    further kite shares a center and a tangency point with a placed one;
    its other center lies on the perpendicular through the tangency point,
    on the far side.  Positions reached along different paths are compared
    (closure), then the pattern is rotated so the two removed faces become
    horizontal lines and translated so the rectangle is centered at 0.

    Raises
    ------
    ClosureError
        When any discrepancy exceeds ``tol`` relative to the pattern size.
    """
    q = ra.q
    m = q.map
    r = ra.radii
    hef = m.half_edge_face
    index = q.index
    kite_at = {(K.white, K.black): k for k, K in enumerate(q.kites)}
    node_vertex = {i: v[1] for i, v in enumerate(q.nodes) if v[0] == "v"}

    centers = {}
    tang = {}
    kites = [None] * len(q.kites)
    err = 0.0

    def set_point(store, key, p):
        nonlocal err
        if key in store:
            err = max(err, float(np.linalg.norm(store[key] - p)))
        else:
            store[key] = p

    def corners_of(k):
        K = q.kites[k]
        return K.corners

    # seed
    K0 = q.kites[0]
    cw = np.zeros(2)
    ta = np.array([r[K0.white], 0.0])
    cb = ta + r[K0.black] * np.array([0.0, 1.0])
    tb = _reflect(ta, cw, cb)
    centers[K0.white], centers[K0.black] = cw, cb
    tang[K0.corners[0]], tang[K0.corners[1]] = ta, tb
    kites[0] = np.array([cw, ta, cb, tb])
    queue = deque([0])
    while queue:
        k = queue.popleft()
        K = q.kites[k]
        v = node_vertex[K.white]
        face = q.nodes[K.black][1]
        for shared, other in ((K.white, K.black), (K.black, K.white)):
            for e in corners_of(k):
                if shared == K.white:
                    f1, f2 = hef[(e[0], e[1])], hef[(e[1], e[0])]
                    nf = f2 if f1 == face else f1
                    j = index.get(("f", nf))
                    nk = kite_at.get((K.white, j)) if j is not None else None
                    new_other = j
                else:
                    w = e[0] if e[1] == v else e[1]
                    j = index.get(("v", w))
                    nk = kite_at.get((j, K.black)) if j is not None else None
                    new_other = j
                if nk is None or kites[nk] is not None:
                    continue
                PX, T, PY = centers[shared], tang[e], centers[other]
                d = T - PX
                perp = np.array([-d[1], d[0]]) / np.linalg.norm(d)
                if np.dot(PY - T, perp) > 0:
                    perp = -perp
                PYn = T + r[new_other] * perp
                e2 = [c for c in corners_of(nk) if c != e][0]
                T2 = _reflect(T, PX, PYn)
                set_point(centers, new_other, PYn)
                set_point(tang, e2, T2)
                NK = q.kites[nk]
                cw_, cb_ = centers[NK.white], centers[NK.black]
                kites[nk] = np.array([cw_, tang[NK.corners[0]], cb_, tang[NK.corners[1]]])
                queue.append(nk)
    if any(K is None for K in kites):
        raise ClosureError("kite adjacency graph is disconnected")
    # re-check every kite against the final positions
    for k, K in enumerate(q.kites):
        pts = [centers[K.white], tang[K.corners[0]], centers[K.black], tang[K.corners[1]]]
        err = max(err, float(np.max(np.abs(np.array(pts) - kites[k]))))
        for t in (1, 3):
            for c, rad in ((pts[0], r[K.white]), (pts[2], r[K.black])):
                err = max(err, abs(float(np.linalg.norm(pts[t] - c)) - rad))

    pts = np.array(list(tang.values()))
    size = float(np.max(np.ptp(pts, axis=0)))
    if err > tol * max(size, 1.0):
        raise ClosureError(f"closure error {err:.3e} exceeds tolerance")

    # boundary lines
    u0, u1 = q.f
    phi0, phi1 = q.removed_faces

    def face_edges(fi):
        face = m.faces[fi]
        return [tuple(sorted((a, b))) for a, b in zip(face, face[1:] + face[:1])
                if tuple(sorted((a, b))) != q.f]

    def vertex_edges(v):
        return [tuple(sorted((v, w))) for w in m.rotation[v] if tuple(sorted((v, w))) != q.f]

    P0 = np.array([tang[e] for e in face_edges(phi0)])
    d = P0[-1] - P0[0]
    theta = -np.arctan2(d[1], d[0])
    c, s = np.cos(theta), np.sin(theta)
    R = np.array([[c, -s], [s, c]])
    rot = {key: R @ p for key, p in tang.items()}
    cen = {key: R @ p for key, p in centers.items()}

    def line_value(edges, axis):
        vals = np.array([rot[e][axis] for e in edges])
        return float(vals.mean()), float(np.ptp(vals))

    y0, dy0 = line_value(face_edges(phi0), 1)
    y1, dy1 = line_value(face_edges(phi1), 1)
    x0, dx0 = line_value(vertex_edges(u0), 0)
    x1, dx1 = line_value(vertex_edges(u1), 0)
    flat = max(dy0, dy1, dx0, dx1)
    if flat > tol * max(size, 1.0):
        raise ClosureError(f"boundary is not an axis-parallel rectangle (deviation {flat:.3e})")
    shift = np.array([(x0 + x1) / 2, (y0 + y1) / 2])
    tang_f = {key: p - shift for key, p in rot.items()}
    cen_arr = np.array([cen[i] - shift for i in range(q.n)])
    lines = {
        ("f", phi0): y0 - shift[1], ("f", phi1): y1 - shift[1],
        ("v", u0): x0 - shift[0], ("v", u1): x1 - shift[0],
    }
    xs = sorted((x0 - shift[0], x1 - shift[0]))
    ys = sorted((y0 - shift[1], y1 - shift[1]))
    kite_list = []
    for K in q.kites:
        kite_list.append(np.array([cen_arr[K.white], tang_f[K.corners[0]],
                                   cen_arr[K.black], tang_f[K.corners[1]]]))
    pat = CirclePattern(q, cen_arr, r.copy(), tang_f, kite_list, lines,
                        (xs[0], xs[1], ys[0], ys[1]), err)
    area_gap = abs(pat.kite_area() - pat.rectangle_area())
    if area_gap > tol * max(pat.rectangle_area(), 1.0) * 10:
        raise ClosureError(f"kites do not tile the rectangle (area gap {area_gap:.3e})")
    return pat
