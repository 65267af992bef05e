"""Small exact linear-algebra helpers over the rationals.

Vectors are tuples of :class:`fractions.Fraction` or of Python ints.  Nothing
here touches floating point.
"""

from fractions import Fraction
from math import gcd, lcm

Rational = Fraction


def as_fraction(x):
    """Exact conversion; strings such as ``"3/4"`` are accepted."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def frac_vector(seq):
    return tuple(as_fraction(x) for x in seq)


def primitive(vec):
    """Divide an integer vector by the gcd of its entries (sign kept)."""
    g = 0
    for x in vec:
        g = gcd(g, x)
    if g <= 1:
        return tuple(vec)
    return tuple(x // g for x in vec)


def clear_denominators(vec):
    """Smallest positive multiple of a rational vector that is integral and primitive."""
    vec = frac_vector(vec)
    L = 1
    for x in vec:
        L = lcm(L, x.denominator)
    return primitive(tuple(int(x * L) for x in vec))


def homogenize(point):
    """Integer homogeneous coordinates ``(L, L*x_1, ..., L*x_d)`` with ``L > 0``."""
    point = frac_vector(point)
    L = 1
    for x in point:
        L = lcm(L, x.denominator)
    return (L,) + tuple(int(x * L) for x in point)


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def affine_value(ineq, point):
    """Evaluate ``a0 + a.x`` for a homogeneous inequality and an affine point."""
    return ineq[0] + sum(a * x for a, x in zip(ineq[1:], point))


def row_reduce(rows, ncols):
    """Reduced row echelon form.  Returns ``(rref_rows, pivot_columns)``."""
    A = [list(frac_vector(r)) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(A):
            break
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(rows, ncols=None):
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(row_reduce(rows, ncols)[1])


def nullspace(rows, ncols):
    """Basis of ``{x : A x = 0}`` as a list of Fraction tuples."""
    rows = list(rows)
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    R, piv = row_reduce(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def integer_kernel_vector(rows, ncols):
    """Primitive integer generator of a one-dimensional kernel, or None."""
    ker = nullspace(rows, ncols)
    if len(ker) != 1:
        return None
    return clear_denominators(ker[0])


def solve(A, b):
    """Solve a square system exactly; returns None when singular."""
    n = len(A)
    M = [list(frac_vector(row)) + [as_fraction(bi)] for row, bi in zip(A, b)]
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c] != 0), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(M[i][n] for i in range(n))


def affine_rank(points):
    """Dimension of the affine hull of a nonempty point list."""
    points = [frac_vector(p) for p in points]
    if not points:
        return -1
    p0 = points[0]
    diffs = [tuple(a - b for a, b in zip(p, p0)) for p in points[1:]]
    if not diffs:
        return 0
    return rank(diffs, len(p0))
