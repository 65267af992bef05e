"""Realize the cube graph twice: by an orthogonal circle pattern and by Tutte-Maxwell.

Run with ``python demos/steinitz_cube.py [outdir]``; writes an SVG of the
circle pattern and OFF files of both realizations.
"""

import sys
from pathlib import Path

import numpy as np

from polyfat.fileio import orient_faces, oriented_facets, write_off
from polyfat.geometry import combinatorially_equivalent
from polyfat.packing import coherent_angle_system, layout_kites, solve_radii
from polyfat.planar import build_quad_graph, platonic_maps
from polyfat.realize import edge_tangency, realize_steinitz, tutte_realization

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(exist_ok=True)

cube = platonic_maps()["cube"]
print("cube map f-vector:", cube.f_vector())

# The quad graph drops the two ends of one edge and its two faces.
q = build_quad_graph(cube)
print("quad graph:", q.n, "circles,", len(q.kites), "kites,", len(q.half_edges), "half-edges")

# An exact angle system certifies that the BS functional has a minimum.
angles = coherent_angle_system(q)
print("exact angle system valid:", angles.check())

ra = solve_radii(q)
print("Newton steps:", len(ra.history) - 1, " final gradient:", f"{ra.residual:.2e}")

pattern = layout_kites(ra)
xmin, xmax, ymin, ymax = pattern.rectangle
print(f"rectangle {xmax - xmin:.4f} x {ymax - ymin:.4f}, closure error {pattern.closure_error:.1e}")
(out / "cube_pattern.svg").write_text(pattern.to_svg())

# Lift to the sphere and read off the edge-tangent polytope.
P = realize_steinitz(cube)
worst, margin = edge_tangency(P.vertices, cube.edges)
print(f"edge tangency residual {worst:.1e}, vertex norms {np.round(np.linalg.norm(P.vertices, axis=1), 4)}")
(out / "cube_packing.off").write_text(write_off(P.vertices, orient_faces(P.vertices, P.faces)))

# The rubber band route is exact; the cube has no triangle so it goes through the octahedron.
T, info = tutte_realization(cube)
print("Tutte-Maxwell via dual:", info["via_dual"], " height range:", [str(h) for h in info["height_range"]])
V = [[float(x) for x in v] for v in T.vertices]
(out / "cube_tutte.off").write_text(write_off(V, oriented_facets(T)))
print("same combinatorics:", combinatorially_equivalent(T, P))
print("files written to", out.resolve())
