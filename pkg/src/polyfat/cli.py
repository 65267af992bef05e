"""Command-line front end.

Every subcommand prints a JSON run report on stdout and writes geometry to
files given by ``--out``.
"""

import argparse
import ast
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import fvectors as fv
from .analysis4d import analyze, fatness, phi_coords, round_half_up
from .constructions import cell24, cross_polytope, dvt, hypersimplex, stacked_polytope
from .deformed import (
    build_deformed_product,
    f_projected_product,
    project_and_measure,
    verify_product_combinatorics,
    verify_survival,
)
from .errors import ConnectivityError, PolytopeError
from .fileio import (
    format_sections,
    orient_faces,
    oriented_facets,
    parse_sections,
    polytope_from_sections,
    polytope_sections,
    write_off,
)
from .planar import is_3_connected, parse_graph
from .realize import realize_steinitz, tutte_realization

__all__ = ["RunReport", "eval_fvector", "main"]


@dataclass
class RunReport:
    """Serializable record of one command run."""

    command: str
    inputs: dict
    outputs: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    timing: float = 0.0

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


# ---------------------------------------------------------------------------
# f-vector expressions

_FV_FUNCS = {
    "cyclic": (lambda d, n: fv.f_cyclic(d, n), ("int", "int")),
    "simplex": (lambda d: fv.f_simplex(d), ("int",)),
    "cross": (lambda d: fv.f_crosspolytope(d), ("int",)),
    "cube": (lambda d: fv.f_cube(d), ("int",)),
    "dual": (fv.f_dual, ("fv",)),
    "product": (fv.f_product, ("fv", "fv")),
    "join": (fv.f_join, ("fv", "fv")),
    "sum": (fv.f_free_sum, ("fv", "fv")),
    "stack": (lambda f, N: fv.f_stack(f, N=N), ("fv", "int")),
    "glue": (fv.f_glue, ("fv", "fv")),
    "truncv": (fv.f_truncate_simple_vertex, ("fv",)),
}


def eval_fvector(expr):
    """Evaluate an f-vector expression such as ``glue(cyclic(8,25), truncv(dual(cyclic(8,25))))``.

    Only the names in the expression language and integer literals are
    accepted; nothing is passed to ``eval``.
    """
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"malformed expression: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            name = node.func.id
            if name not in _FV_FUNCS or node.keywords:
                raise ValueError(f"unknown operation {name!r}")
            fn, kinds = _FV_FUNCS[name]
            if len(node.args) != len(kinds):
                raise ValueError(f"{name} takes {len(kinds)} argument(s)")
            args = [ev(a) for a in node.args]
            for a, k in zip(args, kinds):
                if (k == "int") != isinstance(a, int):
                    raise ValueError(f"{name}: expected {'an integer' if k == 'int' else 'an f-vector'}")
            return fn(*args)
        raise ValueError(f"unsupported syntax: {ast.dump(node)[:40]}")

    out = ev(tree.body)
    if isinstance(out, int):
        raise ValueError("expression evaluates to an integer, not an f-vector")
    return out


# ---------------------------------------------------------------------------
# subcommands

def _write(path, text, report):
    Path(path).write_text(text)
    report.outputs.append(str(path))


def cmd_fvector(args):
    f = eval_fvector(args.expr)
    rep = RunReport("fvector", {"expr": args.expr})
    rep.metrics = {
        "f": list(f.entries),
        "d": f.d,
        "euler": fv.euler_holds(f),
        "unimodal": fv.is_unimodal(f),
        "dips": fv.dips(f),
        "bjorner": fv.bjorner_quarters(f),
        "barany": fv.barany(f),
    }
    return rep


def cmd_realize3d(args):
    m = parse_graph(Path(args.graph).read_text())
    if not is_3_connected(m):
        raise ConnectivityError("input graph is not 3-connected")
    rep = RunReport("realize3d", {"graph": args.graph, "method": args.method, "edge": args.edge})
    if args.method == "packing":
        edge = tuple(sorted(args.edge)) if args.edge else None
        P = realize_steinitz(m, f=edge)
        V = P.vertices
        faces = orient_faces(V, P.faces)
        sections = {"POINTS": [(1.0,) + tuple(float(x) for x in v) for v in V],
                    "VERTICES_IN_FACETS": [frozenset(F) for F in P.faces]}
        rep.metrics = {"f": list(P.f_vector()), **P.residuals}
        if args.svg:
            _write(args.svg, P.pattern.to_svg(), rep)
    else:
        P, info = tutte_realization(m)
        V = [[float(x) for x in v] for v in P.vertices]
        faces = oriented_facets(P)
        sections = polytope_sections(P)
        lo, hi = info["height_range"]
        rep.metrics = {"f": list(P.f_vector()), "height_range": [str(lo), str(hi)],
                       "via_dual": info["via_dual"]}
    if args.out:
        _write(f"{args.out}.off", write_off(V, faces), rep)
        _write(f"{args.out}.poly", format_sections(sections), rep)
    return rep


def _named_polytope(name, n=0, choices=None):
    if name == "hypersimplex":
        return hypersimplex()
    if name == "cell24":
        return cell24()
    if name == "cross":
        return cross_polytope(4)
    if name in ("stack", "dvt-stack"):
        ch = choices if choices is not None else [0] * n
        P, state = stacked_polytope(4, ch)
        return P if name == "stack" else dvt(state)
    path = Path(name)
    if path.exists():
        return polytope_from_sections(parse_sections(path.read_text()))
    raise ValueError(f"unknown polytope {name!r}")


def _choices(text):
    return None if text is None else [int(t) for t in text.split(",") if t.strip()]


def cmd_construct(args):
    P = _named_polytope(args.name, args.n, _choices(args.choices))
    rep = RunReport("construct", {"name": args.name, "n": args.n, "choices": args.choices})
    f = P.f_vector()
    rep.metrics = {"f": list(f), "dim": P.dim}
    if P.dim == 4:
        F = fatness(f)
        rep.metrics.update(fatness=str(F), fatness_decimal=round_half_up(F))
    if args.out:
        _write(args.out, format_sections(polytope_sections(P)), rep)
    return rep


def cmd_analyze4d(args):
    P = _named_polytope(args.name, args.n, _choices(args.choices))
    rep = RunReport("analyze4d", {"name": args.name, "n": args.n, "choices": args.choices})
    rep.metrics = analyze(P)
    return rep


def cmd_deformed(args):
    spec = build_deformed_product(args.r, args.n)
    rep = RunReport("deformed-product", {"r": args.r, "n": args.n, "project": args.project})
    rep.metrics = {
        "eps": str(spec.eps),
        "M": str(spec.M),
        "dim": spec.dim,
        "n_inequalities": len(spec.matrix),
        "product_combinatorics": bool(verify_product_combinatorics(spec)),
        "survival": bool(verify_survival(spec)),
    }
    if args.out:
        _write(f"{args.out}.poly", format_sections({"INEQUALITIES": spec.homogeneous()}), rep)
    if args.project:
        Q, f, F, census = project_and_measure(spec)
        expected = f_projected_product(args.r, args.n)
        p0, p3 = phi_coords(f.entries)
        rep.metrics.update(
            f=list(f.entries), f_formula=list(expected.entries), formula_match=f == expected,
            fatness=str(F), fatness_decimal=round_half_up(F), phi0=str(p0), phi3=str(p3),
            census={f"{k[0]} vertices, {k[1]} polygons": v for k, v in sorted(census.items())},
        )
        if args.out:
            _write(f"{args.out}-projected.poly", format_sections(polytope_sections(Q)), rep)
    return rep


def build_parser():
    p = argparse.ArgumentParser(prog="polyfat", description="Polytope constructions and f-vector tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("realize3d", help="realize a planar map as a 3-polytope")
    s.add_argument("graph", help="rotation-system file, one 'v: n1 n2 ...' line per vertex")
    s.add_argument("--method", choices=("packing", "tutte"), default="packing")
    s.add_argument("--edge", type=int, nargs=2, metavar=("U", "V"),
                   help="edge sent to infinity (packing only)")
    s.add_argument("--out", help="output prefix for .off and .poly files")
    s.add_argument("--svg", help="write the circle pattern as SVG (packing only)")
    s.set_defaults(func=cmd_realize3d)

    s = sub.add_parser("fvector", help="evaluate an f-vector expression")
    s.add_argument("expr")
    s.set_defaults(func=cmd_fvector)

    for name, func, hlp in (("construct", cmd_construct, "build a 4-polytope"),
                            ("analyze4d", cmd_analyze4d, "flag-vector analysis of a 4-polytope")):
        s = sub.add_parser(name, help=hlp)
        s.add_argument("name", help="hypersimplex, cell24, cross, stack, dvt-stack or a .poly file")
        s.add_argument("--n", type=int, default=0, help="number of stacking steps")
        s.add_argument("--choices", help="comma-separated facet indices for stacking")
        if name == "construct":
            s.add_argument("--out", help="polymake output file")
        s.set_defaults(func=func)

    s = sub.add_parser("deformed-product", help="deformed product of r polygons")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--project", action="store_true", help="project to R^4 and measure")
    s.add_argument("--out", help="output prefix for .poly files")
    s.set_defaults(func=cmd_deformed)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        rep = args.func(args)
    except (PolytopeError, ValueError, OSError) as exc:
        line = getattr(exc, "line", None)
        msg = {"command": args.command, "error": type(exc).__name__, "message": str(exc)}
        if line is not None:
            msg["line"] = line
        print(json.dumps(msg, indent=2), file=sys.stderr)
        return 2
    rep.timing = round(time.perf_counter() - t0, 3)
    print(rep.to_json())
    return 0


if __name__ == "__main__":
    sys.exit(main())
