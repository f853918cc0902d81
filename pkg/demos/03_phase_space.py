# %% [markdown]
# # Wigner and Husimi functions on a grid
#
# Fields are sampled from the Fock-basis density matrix. The Husimi
# function can also be obtained by Gaussian smoothing of the Wigner
# function in Fourier space, which gives an independent check.

# %%
import math

import numpy as np

from qroughness import (
    PhaseSpaceGrid,
    auto_grid,
    husimi_field,
    make_cat,
    make_fock,
    negativity,
    roughness_numeric,
    smooth_to_husimi,
    spectral_roughness,
    wigner_field,
    wigner_purity,
)

# %% An odd cat: interference fringes make W negative
rho = make_cat(2.0, "odd", 30)
grid = auto_grid(rho)
w = wigner_field(rho, grid)
q = husimi_field(rho, grid)
print(grid.nq, grid.q_max, w.values.min(), q.values.min())
print("integral of W:", w.integral(), " purity from W:", wigner_purity(w))

# %% Two routes to the Husimi function
print(np.max(np.abs(smooth_to_husimi(w).values - q.values)))

# %% Roughness from the grid, directly and spectrally
print(roughness_numeric(w, q), spectral_roughness(w))

# %% Negativity of |1>: 4 e^{-1/2} - 2
w1 = wigner_field(make_fock(1, 2), PhaseSpaceGrid.centered(7.0, 0.025))
print(negativity(w1), 4 * math.exp(-0.5) - 2)

# %% Fields can be exported for plotting elsewhere
w1.to_csv("/tmp/fock1_wigner.csv")
