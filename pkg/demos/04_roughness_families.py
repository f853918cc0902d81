# %% [markdown]
# # Roughness of the standard state families
#
# R is the scaled L2 distance between W and Q. Closed forms exist for
# Fock, squeezed, cat and thermal states; every other state goes through
# the Fock-basis tensor route.

# %%
import math

import numpy as np

from qroughness import (
    build_tensor_cache,
    make_coherent,
    make_diagonal,
    roughness_cat,
    roughness_fock,
    roughness_general,
    roughness_squeezed,
    roughness_thermal,
    search_pure_minimum,
)

# %% Coherent states sit at 1/sqrt(6)
cache = build_tensor_cache(30)
print(roughness_general(make_coherent(1 + 1j, 30), cache).r, 1 / math.sqrt(6))

# %% Fock states climb slowly towards 1
for n in (0, 1, 2, 5, 10, 50, 200):
    print(n, roughness_fock(n).r)

# %% Squeezing drives R to 1, symmetrically in zeta
print([round(roughness_squeezed(z), 6) for z in (-2, -1, 0, 1, 2, 12)])

# %% Cats: both parities approach sqrt(7/12) once the components separate
for q0 in (0.5, 1, 2, 4, 10):
    print(q0, roughness_cat(q0, "even"), roughness_cat(q0, "odd"))
print(math.sqrt(7 / 12))

# %% Thermal states become smooth, diagonal states do not
small = build_tensor_cache(41, max_offset=0)
for m in (1, 4, 10, 20, 40):
    print(m / 2, roughness_thermal(m / 2), roughness_general(make_diagonal(m, m + 1), small).r)

# %% No pure state in a small space beats the coherent value
best, _ = search_pure_minimum(6, 200, rng=np.random.default_rng(0))
print(best)
