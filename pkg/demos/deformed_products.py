"""Deformed products of polygons and their projections to R^4."""

from polyfat.analysis4d import fatness, round_half_up
from polyfat.deformed import (
    build_deformed_product,
    f_projected_product,
    project_and_measure,
    solve_block_params,
)

params = solve_block_params(3)
print("block parameters:", {k: str(v) for k, v in params.items()})

for r, n in [(2, 4), (3, 4), (3, 6)]:
    spec = build_deformed_product(r, n)
    Q, f, F, census = project_and_measure(spec)
    print(f"\n(r, n) = ({r}, {n}): eps = {spec.eps}, M = {spec.M}")
    print("  projected f =", f.entries, " formula:", f == f_projected_product(r, n))
    print("  fatness =", F, f"({round_half_up(F)})")
    for (nv, polys), count in sorted(census.items()):
        kind = "cube" if nv == 8 and polys == 0 else f"{nv // 2}-gon prism"
        print(f"  {count} facets of type {kind}")

# The closed form shows fatness creeping towards 9.
print("\nfatness of the projected family:")
for r in (5, 10, 20, 40):
    print(f"  r={r:2d}: " + ", ".join(
        f"n={n}: {round_half_up(fatness(f_projected_product(r, n).entries), 3)}" for n in (4, 16, 64)))
