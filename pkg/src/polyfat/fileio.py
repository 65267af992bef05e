"""Text formats: polymake-style sections and OFF.

A polymake section is a header line in capital letters followed by one
row per line; sections end at a blank line.  POINTS and VERTICES rows are
homogeneous ``(1, x_1, ..., x_d)``; INEQUALITIES and FACETS rows
``(a_0, ..., a_d)`` encode ``a_0 + a_1 x_1 + ... + a_d x_d >= 0``.
"""

import re
from fractions import Fraction

import numpy as np

from .errors import DomainError, ParseError
from .geometry import hull, vertex_enumeration

__all__ = [
    "format_sections",
    "parse_sections",
    "polytope_sections",
    "polytope_from_sections",
    "write_off",
    "read_off",
    "oriented_facets",
    "orient_faces",
]

_HEADER = re.compile(r"^[A-Z][A-Z0-9_]*$")
_SET_ROW = re.compile(r"^\{([\d\s]*)\}$")


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_sections(sections):
    """Render ``{name: rows}``; a row is a sequence of numbers or a set of indices."""
    parts = []
    for name, rows in sections.items():
        lines = [name]
        for row in rows:
            if isinstance(row, (set, frozenset)):
                lines.append("{" + " ".join(str(i) for i in sorted(row)) + "}")
            else:
                lines.append(" ".join(_fmt(x) for x in row))
        parts.append("\n".join(lines) + "\n")
    return "\n".join(parts)


def parse_sections(text):
    """Parse sections into ``{name: list of rows}``.

    Numeric rows become tuples of Fraction; ``{i j k}`` rows become
    frozensets of int.  ``#`` starts a comment.

    Raises
    ------
    ParseError
        With the offending line number.
    """
    out = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            current = None
            continue
        if current is None:
            if not _HEADER.match(line):
                raise ParseError(f"expected a section header, got {line!r}", line=lineno)
            if line in out:
                raise ParseError(f"duplicate section {line}", line=lineno)
            current = out[line] = []
            continue
        m = _SET_ROW.match(line)
        if m:
            current.append(frozenset(int(t) for t in m.group(1).split()))
            continue
        try:
            current.append(tuple(Fraction(t) for t in line.split()))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad number in {line!r}", line=lineno) from None
    return out


def polytope_sections(P):
    """VERTICES, FACETS and VERTICES_IN_FACETS of an ExactPolytope."""
    return {
        "VERTICES": [(1,) + tuple(v) for v in P.vertices],
        "FACETS": [tuple(a) for a in P.inequalities],
        "VERTICES_IN_FACETS": [frozenset(F) for F in P.incidences],
    }


def polytope_from_sections(sections):
    """Build an ExactPolytope from POINTS/VERTICES or INEQUALITIES/FACETS."""
    for key in ("VERTICES", "POINTS"):
        if key in sections:
            pts = []
            for row in sections[key]:
                if row[0] == 0:
                    raise DomainError("rays are not supported")
                pts.append(tuple(x / row[0] for x in row[1:]))
            return hull(pts)
    for key in ("FACETS", "INEQUALITIES"):
        if key in sections:
            return vertex_enumeration(sections[key])
    raise DomainError("no POINTS, VERTICES, INEQUALITIES or FACETS section")


def oriented_facets(P):
    """Vertex cycles of the facets of a 3-dimensional ExactPolytope,
    counterclockwise as seen from outside."""
    if P.dim != 3:
        raise DomainError("OFF export is for 3-polytopes")
    V = np.array([[float(x) for x in v] for v in P.vertices])
    out = []
    for a, F in zip(P.inequalities, P.incidences):
        idx = sorted(F)
        n = -np.array([float(x) for x in a[1:]])  # outward normal
        c = V[idx].mean(axis=0)
        u = V[idx[0]] - c
        u /= np.linalg.norm(u)
        w = np.cross(n / np.linalg.norm(n), u)
        ang = [np.arctan2((V[i] - c) @ w, (V[i] - c) @ u) for i in idx]
        out.append(tuple(i for _, i in sorted(zip(ang, idx))))
    return out


def orient_faces(vertices, faces):
    """Reverse face cycles whose Newell normal points inwards (convex input)."""
    V = np.asarray(vertices, dtype=float)
    center = V.mean(axis=0)
    out = []
    for F in faces:
        P = V[list(F)]
        n = np.cross(P, np.roll(P, -1, axis=0)).sum(axis=0)
        out.append(tuple(F) if n @ (P.mean(axis=0) - center) > 0 else tuple(reversed(F)))
    return out


def write_off(vertices, faces):
    """OFF text; faces must already be oriented."""
    V = np.asarray(vertices, dtype=float)
    edges = set()
    for F in faces:
        for a, b in zip(F, F[1:] + F[:1]):
            edges.add((min(a, b), max(a, b)))
    lines = ["OFF", f"{len(V)} {len(faces)} {len(edges)}"]
    lines += [" ".join(repr(float(x)) for x in v) for v in V]
    lines += [" ".join(str(x) for x in (len(F),) + tuple(F)) for F in faces]
    return "\n".join(lines) + "\n"


def read_off(text):
    """Parse OFF text into ``(vertices array, list of face tuples)``."""
    toks = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            toks.append((lineno, line))
    if not toks or toks[0][1] != "OFF":
        raise ParseError("missing OFF header", line=toks[0][0] if toks else 1)
    try:
        nv, nf, _ = (int(t) for t in toks[1][1].split())
        V = np.array([[float(t) for t in toks[2 + i][1].split()] for i in range(nv)])
        faces = []
        for j in range(nf):
            lineno, line = toks[2 + nv + j]
            nums = [int(t) for t in line.split()]
            if nums[0] != len(nums) - 1:
                raise ParseError("face length mismatch", line=lineno)
            faces.append(tuple(nums[1:]))
    except ParseError:
        raise
    except (IndexError, ValueError):
        raise ParseError("truncated or malformed OFF data", line=toks[-1][0]) from None
    return V, faces
