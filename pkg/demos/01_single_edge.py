# %% [markdown]
# # One Z⊗Z bond
#
# The smallest model has two spins coupled by Z⊗Z.  Its normalized
# partition function is cosh(beta), so every truncation order can be checked
# against a closed form.

# %%
import math

import numpy as np

from quantum_cluster import SpinModel, truncated_expansion
from quantum_cluster.operators import PAULI_Z

zz = np.kron(PAULI_Z, PAULI_Z)
model = SpinModel(("a", "b"), ((0, 1),), (zz,))
beta = 1 / math.exp(4.0)

# %% [markdown]
# The expansion is a polynomial in beta.  Odd powers vanish because
# tr(Z⊗Z)^odd = 0, and the quadratic term is beta^2 / 2.

# %%
res = truncated_expansion(model, beta, 8)
print("coefficients:", np.round(res.coefficients, 12))

# %% [markdown]
# Error against log cosh(beta) next to the tail bound |V| e^-m.

# %%
exact = math.log(math.cosh(beta))
print(f"{'m':>3} {'|t_m - log cosh|':>18} {'2 e^-m':>12}")
for m in range(2, 13):
    gap = abs(truncated_expansion(model, beta, m).t_m - exact)
    print(f"{m:>3} {gap:>18.3e} {2 * math.exp(-m):>12.3e}")
