"""Exact f-vector algebra.

An :class:`FVector` stores ``(f_0, ..., f_{d-1})`` as Python ints, so all
formulas below are exact at any size.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .errors import ApexError, DomainError, PreconditionError, ResourceLimitError

__all__ = [
    "FVector",
    "steinitz_member",
    "slope_phi",
    "imbalance_sigma",
    "f_simplex",
    "f_crosspolytope",
    "f_cube",
    "f_cyclic",
    "cyclic_h_vector",
    "gale_facets",
    "faces_by_enumeration",
    "f_product",
    "f_join",
    "f_free_sum",
    "f_dual",
    "f_stack",
    "f_glue",
    "f_truncate_simple_vertex",
    "is_unimodal",
    "dips",
    "bjorner_quarters",
    "barany",
    "euler_holds",
]


@dataclass(frozen=True)
class FVector:
    """Face numbers ``(f_0, ..., f_{d-1})`` of a d-polytope."""

    entries: tuple

    def __post_init__(self):
        ent = tuple(int(x) for x in self.entries)
        if not ent:
            raise DomainError("empty f-vector")
        if any(x <= 0 for x in ent):
            raise DomainError(f"f-vector entries must be positive: {ent}")
        object.__setattr__(self, "entries", ent)

    @property
    def d(self):
        return len(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def reverse(self):
        return FVector(tuple(reversed(self.entries)))

    def euler_characteristic(self):
        return sum((-1) ** i * f for i, f in enumerate(self.entries))

    def to_json(self):
        return json.dumps({"d": self.d, "f": list(self.entries)})

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        fv = cls(tuple(obj["f"]))
        if "d" in obj and obj["d"] != fv.d:
            raise DomainError("dimension tag does not match entry count")
        return fv

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.entries) + ")"


def _fv(f):
    return f if isinstance(f, FVector) else FVector(tuple(f))


def euler_holds(f):
    """Euler-Poincare: alternating sum equals ``1 - (-1)^d``."""
    f = _fv(f)
    return f.euler_characteristic() == 1 - (-1) ** f.d


# ---------------------------------------------------------------------------
# 3-dimensional

def steinitz_member(f):
    """Membership of a 3-dimensional f-vector in the Steinitz region."""
    f0, f1, f2 = _fv(f).entries
    return f0 - f1 + f2 == 2 and f2 <= 2 * f0 - 4 and f0 <= 2 * f2 - 4


def slope_phi(f):
    """``(f_2 - 4) / (f_0 - 4)``; undefined for the tetrahedron."""
    f0, _, f2 = _fv(f).entries
    if f0 == 4:
        raise ApexError("slope is 0/0 at the simplex")
    return Fraction(f2 - 4, f0 - 4)


def imbalance_sigma(f):
    """``(f_2 - f_0) / (f_1 - 6)``; undefined for the tetrahedron."""
    f0, f1, f2 = _fv(f).entries
    if f1 == 6:
        raise ApexError("imbalance is 0/0 at the simplex")
    return Fraction(f2 - f0, f1 - 6)


# ---------------------------------------------------------------------------
# basic shapes

def _check_dim(d):
    if d < 1:
        raise DomainError("dimension must be >= 1")


def f_simplex(d):
    _check_dim(d)
    return FVector(tuple(comb(d + 1, k + 1) for k in range(d)))


def f_crosspolytope(d):
    _check_dim(d)
    return FVector(tuple(comb(d, k + 1) * 2 ** (k + 1) for k in range(d)))


def f_cube(d):
    return f_crosspolytope(d).reverse()


def cyclic_h_vector(d, n):
    """h-vector of the cyclic polytope ``C_d(n)``."""
    if not (n > d >= 2):
        raise DomainError("cyclic polytope needs n > d >= 2")
    h = [0] * (d + 1)
    for i in range(d // 2 + 1):
        h[i] = comb(n - d - 1 + i, i)
        h[d - i] = h[i]
    return tuple(h)


def f_cyclic(d, n):
    """f-vector of ``C_d(n)`` via the h-vector and Dehn-Sommerville symmetry."""
    h = cyclic_h_vector(d, n)
    f = [sum(comb(d - i, d - j) * h[i] for i in range(j + 1)) for j in range(1, d + 1)]
    return FVector(tuple(f))


def gale_facets(d, n, limit=2_000_000):
    """Facets of ``C_d(n)`` on vertices ``0..n-1`` by Gale's evenness criterion."""
    if not n > d:
        raise DomainError("need n > d")
    if comb(n, d) > limit:
        raise ResourceLimitError(f"C({n},{d}) candidate sets exceed limit {limit}")
    out = []
    for S in combinations(range(n), d):
        inside = set(S)
        ok = True
        outside = [i for i in range(n) if i not in inside]
        for a, b in zip(outside, outside[1:]):
            if (b - a - 1) % 2:
                ok = False
                break
        if ok:
            out.append(S)
    return out


def faces_by_enumeration(d, n):
    """f-vector of ``C_d(n)`` from the facet list (all subsets of facets are faces)."""
    faces = [set() for _ in range(d)]
    for F in gale_facets(d, n):
        for k in range(1, d + 1):
            faces[k - 1].update(combinations(F, k))
    return FVector(tuple(len(s) for s in faces))


# ---------------------------------------------------------------------------
# convolutions

def f_product(f, g):
    """f-vector of ``P x Q`` (convention ``f_d = 1``)."""
    f, g = _fv(f), _fv(g)
    a = list(f.entries) + [1]
    b = list(g.entries) + [1]
    d = f.d + g.d
    out = []
    for m in range(d):
        out.append(sum(a[k] * b[m - k] for k in range(len(a)) if 0 <= m - k < len(b)))
    return FVector(tuple(out))


def f_join(f, g):
    """f-vector of the join ``P * Q`` (convention ``f_{-1} = 1``)."""
    f, g = _fv(f), _fv(g)
    # position 0 holds f_{-1} = 1 and the last position the polytope itself
    a = [1] + list(f.entries) + [1]
    b = [1] + list(g.entries) + [1]
    d = f.d + g.d + 1
    out = []
    for m in range(d):
        s = m + 1  # f_m collects shifted index pairs summing to m + 1
        out.append(sum(a[k] * b[s - k] for k in range(len(a)) if 0 <= s - k < len(b)))
    return FVector(tuple(out))


def f_dual(f):
    return _fv(f).reverse()


def f_free_sum(f, g):
    """f-vector of the free sum, the polar of the product of polars."""
    return f_product(_fv(f).reverse(), _fv(g).reverse()).reverse()


# ---------------------------------------------------------------------------
# local modifications

def f_stack(f, d=None, N=1, simplicial_facet=True):
    """Stack ``N`` pyramids, one at a time onto simplex facets."""
    f = _fv(f)
    d = f.d if d is None else d
    if d != f.d:
        raise DomainError("dimension mismatch")
    if not simplicial_facet:
        raise PreconditionError("stacking needs a simplex facet")
    if N < 0:
        raise DomainError("N must be nonnegative")
    out = [f[k] + N * comb(d, k) for k in range(d - 1)]
    out.append(f[d - 1] + N * (d - 1))
    return FVector(tuple(out))


def f_glue(f, g, d=None, simplicial_facets=True):
    """Glue along a simplex facet present in both polytopes (projectively adjusted)."""
    f, g = _fv(f), _fv(g)
    d = f.d if d is None else d
    if f.d != d or g.d != d:
        raise DomainError("dimension mismatch")
    if not simplicial_facets:
        raise PreconditionError("gluing needs a simplex facet on each side")
    out = [f[k] + g[k] - comb(d, k + 1) for k in range(d - 1)]
    out.append(f[d - 1] + g[d - 1] - 2)
    return FVector(tuple(out))


def f_truncate_simple_vertex(f, d=None, simple_vertex=True):
    """Cut off one simple vertex; a new simplex facet appears."""
    f = _fv(f)
    d = f.d if d is None else d
    if d != f.d:
        raise DomainError("dimension mismatch")
    if not simple_vertex:
        raise PreconditionError("truncation needs a simple vertex")
    out = [f[0] + d - 1] + [f[k] + comb(d, k + 1) for k in range(1, d)]
    return FVector(tuple(out))


# ---------------------------------------------------------------------------
# shape predicates

def is_unimodal(f):
    """Weakly increasing up to some index, weakly decreasing afterwards."""
    e = _fv(f).entries
    k = 0
    while k + 1 < len(e) and e[k] <= e[k + 1]:
        k += 1
    while k + 1 < len(e) and e[k] >= e[k + 1]:
        k += 1
    return k == len(e) - 1


def dips(f):
    """All ``k`` with ``f_{k-1} > f_k < f_{k+1}``.

    Valleys spread over a plateau (``f_{k-1} > f_k = f_{k+1} < f_{k+2}``)
    are not listed; ``is_unimodal`` still rejects them.
    """
    e = _fv(f).entries
    return [k for k in range(1, len(e) - 1) if e[k - 1] > e[k] < e[k + 1]]


def bjorner_quarters(f):
    """Strict increase on the first quarter and strict decrease on the last."""
    e = _fv(f).entries
    d = len(e)
    up = -(-(d - 1) // 4)
    down = (3 * (d - 1)) // 4
    inc = all(e[i] < e[i + 1] for i in range(up))
    dec = all(e[i] > e[i + 1] for i in range(down, d - 1))
    return inc and dec


def barany(f):
    """Every entry is at least ``min(f_0, f_{d-1})``."""
    e = _fv(f).entries
    m = min(e[0], e[-1])
    return all(x >= m for x in e)
