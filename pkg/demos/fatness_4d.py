"""Fat 4-polytopes: the hypersimplex, the 24-cell and deep vertex truncations of stacked polytopes."""

from polyfat.analysis4d import analyze, fatness, round_half_up
from polyfat.constructions import cell24, dvt, hypersimplex, stacked_polytope

for name, P in [("hypersimplex", hypersimplex()), ("24-cell", cell24())]:
    rep = analyze(P)
    print(f"{name:13s} f = {tuple(rep['f'])}  phi = ({rep['phi0']}, {rep['phi3']})  "
          f"fatness = {rep['fatness']} ({rep['fatness_decimal']})  2s2s = {rep['2s2s']}")

# Each stacking step adds a vertex; the truncation stays 2-simple and 2-simplicial.
print("\nDVT(Stack(n, 4)):")
for n in range(6):
    _, state = stacked_polytope(4, [0] * n)
    D = dvt(state)
    f = D.f_vector()
    print(f"  n={n}: f = {f}  fatness = {round_half_up(fatness(f))}")

# The limit of the family is 9/2, approached from below.
for n in (10, 100, 1000):
    f = (10 + 4 * n, 30 + 18 * n, 30 + 18 * n, 10 + 4 * n)
    print(f"  formula n={n}: fatness = {round_half_up(fatness(f))}")
