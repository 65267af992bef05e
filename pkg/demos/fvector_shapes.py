"""Shapes of f-vectors: cyclic polytopes, the Eckhoff vector and a non-unimodal dip."""

from polyfat.fvectors import (
    barany,
    bjorner_quarters,
    dips,
    f_cyclic,
    f_dual,
    f_glue,
    f_product,
    f_stack,
    f_truncate_simple_vertex,
    faces_by_enumeration,
    is_unimodal,
)

# Cyclic polytopes: closed form against Gale evenness.
for d, n in [(4, 8), (6, 10), (8, 12)]:
    f = f_cyclic(d, n)
    print(f"C_{d}({n}) =", f.entries, " enumeration agrees:", f == faces_by_enumeration(d, n))

# Gluing C_8(25) to its truncated dual gives the Eckhoff vector, with a flat valley.
eck = f_glue(f_cyclic(8, 25), f_truncate_simple_vertex(f_dual(f_cyclic(8, 25))))
print("\nEckhoff vector:", eck.entries)
print("unimodal:", is_unimodal(eck), " strict dips:", dips(eck))

# Stacking many times onto C_20(200) pushes f_12 below both neighbours.
N = 259 * 10**11
f = f_stack(f_cyclic(20, 200), N=N)
print(f"\nstack^{N} C_20(200):")
for k in (11, 12, 13):
    print(f"  f_{k} = {f[k]}")
print("dips:", dips(f), " Bjorner quarters:", bjorner_quarters(f), " Barany:", barany(f))

# Products of polygons.
print("\nproduct of two 10-gons:", f_product(f_cyclic(2, 10), f_cyclic(2, 10)).entries)
