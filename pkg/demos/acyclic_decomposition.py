"""
Decomposing a morphism over an acyclic architecture
===================================================

When processes communicate along a tree, any morphism into a finite
transformation monoid is simulated by a product of per-process factors.
"""

from tracecascade import acyclic_decompose, enumerate_traces
from tracecascade.catalog import four_element_morphism

phi = four_element_morphism()
print("target monoid size:", len(phi.monoid))

# %%
d = acyclic_decompose(phi)
print("leaf order:", " ".join(d.order))
for factor in d.factors:
    print(" ", factor.describe(phi.alphabet))
print("carrier size:", d.morphism.size, "simulates:", d.verify())

# %%
# Every point the source can reach is recovered through the map.
f = d.sim_map
ok = all(
    phi(t)[x] == f[d.morphism(t)[f.index(x)]]
    for t in enumerate_traces(phi.alphabet, 4)
    for x in range(phi.size)
)
print("pointwise agreement:", ok)
