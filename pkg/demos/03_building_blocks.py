# %% [markdown]
# # Polymers, clusters and Ursell coefficients
#
# The pieces behind the expansion, on a 3-site chain.

# %%
from quantum_cluster import (
    IncompatibilityGraph, enumerate_clusters, enumerate_connected_edge_sets, enumerate_polymers,
    polymer_weight, polymer_weight_oracle, preset, ursell_fast,
)
from quantum_cluster.cluster import ordering_multiplicity

chain = preset("random_hermitian", "path", n=3, seed=11)
print("connected edge sets:", enumerate_connected_edge_sets(chain, 2))

# %% [markdown]
# ## Polymers and weights
#
# A polymer is an edge multiset with connected support.  The fast weight and
# the brute-force ordering sum agree.

# %%
beta = 0.01
for p in enumerate_polymers(chain, 3):
    fast = polymer_weight(p, chain, beta)
    slow = polymer_weight_oracle(p, chain, beta)
    print(f"{str(p.multiplicity):<16} {fast.real:+.3e}  |diff| = {abs(fast - slow):.1e}")

# %% [markdown]
# ## Ursell function
#
# phi(K2) = -1/2, phi(K3) = 1/3, phi(P3) = 1/6.

# %%
for name, edges, n in (("K2", [(0, 1)], 2), ("K3", [(0, 1), (1, 2), (0, 2)], 3), ("P3", [(0, 1), (1, 2)], 3)):
    print(name, ursell_fast(IncompatibilityGraph.from_edges(n, edges)))

# %% [markdown]
# ## Clusters
#
# Clusters of total size below 3: each carries the number of orderings
# times the Ursell value of its overlap graph.

# %%
polys = enumerate_polymers(chain, 2)
for c in enumerate_clusters(polys, 3):
    coeff = ordering_multiplicity(c) * ursell_fast(c.graph)
    print([p.multiplicity for p in c.polymers], "coefficient", coeff)
