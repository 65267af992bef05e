"""Flag-vector analytics for 4-polytopes.

Everything is an exact :class:`fractions.Fraction`; decimal strings are only
produced by :func:`round_half_up` for reports.
"""

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction

from .errors import ApexError, DomainError

__all__ = [
    "FlagData4",
    "phi_coords",
    "fatness",
    "complexity",
    "pentagon_member",
    "is_2s2s",
    "flag_tightness",
    "symmetric_f_check",
    "round_half_up",
    "analyze",
]


def _f4(f):
    f = tuple(int(x) for x in f)
    if len(f) != 4:
        raise DomainError("expected a 4-dimensional f-vector")
    return f


@dataclass(frozen=True)
class FlagData4:
    """f-vector of a 4-polytope plus the vertex-facet incidence count ``f03``."""

    f: tuple
    f03: int

    def __post_init__(self):
        f = _f4(self.f)
        object.__setattr__(self, "f", f)
        if f[0] - f[1] + f[2] - f[3] != 0:
            raise DomainError(f"Euler relation fails for {f}")

    @property
    def f02(self):
        return self.f03 + 2 * self.f[1] - 2 * self.f[0]

    @property
    def f13(self):
        return self.f03 + 2 * self.f[2] - 2 * self.f[3]

    @classmethod
    def from_lattice(cls, lat):
        return cls(lat.f_vector(), lat.flag_count(0, 3))

    @classmethod
    def from_polytope(cls, P):
        return cls(P.f_vector(), sum(len(F) for F in P.incidences))


def phi_coords(f):
    """``(phi_0, phi_3)`` with common denominator ``f_1 + f_2 - 20``."""
    f0, f1, f2, f3 = _f4(f)
    den = f1 + f2 - 20
    if den == 0:
        raise ApexError("phi coordinates are 0/0 at the simplex")
    return Fraction(f0 - 5, den), Fraction(f3 - 5, den)


def fatness(f):
    """``(f_1 + f_2 - 20) / (f_0 + f_3 - 10)``."""
    f0, f1, f2, f3 = _f4(f)
    den = f0 + f3 - 10
    if den == 0:
        raise ApexError("fatness is 0/0 at the simplex")
    return Fraction(f1 + f2 - 20, den)


def complexity(fd):
    """``(f_03 - 20) / (f_0 + f_3 - 10)``."""
    f0, _, _, f3 = fd.f
    den = f0 + f3 - 10
    if den == 0:
        raise ApexError("complexity is 0/0 at the simplex")
    return Fraction(fd.f03 - 20, den)


_PENTAGON = (
    ("few vertices", lambda a, b: a >= 0),
    ("few facets", lambda a, b: b >= 0),
    ("simple", lambda a, b: 3 * a + b <= 1),
    ("simplicial", lambda a, b: a + 3 * b <= 1),
    ("lower bound", lambda a, b: a + b <= Fraction(2, 5)),
)


def pentagon_member(phi0, phi3):
    """Check the five linear constraints.

    Returns
    -------
    (bool, list of str)
        Membership flag and the names of violated constraints.
    """
    a, b = Fraction(phi0), Fraction(phi3)
    bad = [name for name, ok in _PENTAGON if not ok(a, b)]
    return not bad, bad


def is_2s2s(lat):
    """All 2-faces are triangles and every edge lies in exactly three facets."""
    if lat.dim != 4:
        raise DomainError("2s2s test is for 4-dimensional lattices")
    if any(len(g) != 3 for g in lat.faces(2)):
        return False
    facets = [frozenset(F) for F in lat.faces(3)]
    for e in lat.faces(1):
        e = set(e)
        if sum(1 for F in facets if e <= F) != 3:
            return False
    return True


def flag_tightness(fd):
    """Equality in ``2 f_03 >= (f_1 + f_2) + 2 (f_0 + f_3)``."""
    f0, f1, f2, f3 = fd.f
    return 2 * fd.f03 == (f1 + f2) + 2 * (f0 + f3)


def symmetric_f_check(f):
    f0, f1, f2, f3 = _f4(f)
    return f0 == f3 and f1 == f2


def round_half_up(x, places=3):
    """Decimal string of a Fraction, rounded half-up."""
    x = Fraction(x)
    q = Decimal(x.numerator) / Decimal(x.denominator)
    return str(q.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


def analyze(P):
    """JSON-ready summary of a 4-polytope given as an ExactPolytope."""
    lat = P.lattice
    fd = FlagData4.from_lattice(lat)
    p0, p3 = phi_coords(fd.f)
    inside, bad = pentagon_member(p0, p3)
    F = fatness(fd.f)
    C = complexity(fd)
    return {
        "f": list(fd.f),
        "f03": fd.f03,
        "phi0": str(p0),
        "phi3": str(p3),
        "fatness": str(F),
        "fatness_decimal": round_half_up(F),
        "complexity": str(C),
        "pentagon": inside,
        "pentagon_violations": bad,
        "2s2s": is_2s2s(lat),
    }
