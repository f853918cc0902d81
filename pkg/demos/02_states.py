# %% [markdown]
# # Density matrices in the Fock basis
#
# Constructors truncate at an explicit dimension and refuse to drop more
# than 1e-8 of the probability.

# %%
import numpy as np

from qroughness import (
    MixtureSpec,
    TruncationError,
    default_thermal_dim,
    entropy_diagonal,
    fidelity,
    linear_entropy,
    make_cat,
    make_coherent,
    make_diagonal,
    make_fock,
    make_mixture,
    make_thermal,
    mean_photon,
    nbar_from_beta,
    zmax_scan,
)

# %% Coherent state: Poisson populations, mean photon number |alpha|^2
rho = make_coherent(1.5 + 0.5j, 30)
print(mean_photon(rho), abs(1.5 + 0.5j) ** 2)

# %% Truncation that is too tight fails loudly with a suggested dimension
try:
    make_coherent(3.0, 10)
except TruncationError as exc:
    print("TruncationError:", exc)

# %% Even and odd cats populate only even or odd Fock levels
print(np.round(make_cat(1.2, "odd", 10).populations, 4))

# %% Thermal and diagonal states at equal mean photon number share 1 - Tr rho^2
nbar = 2.0
thermal = make_thermal(nbar, default_thermal_dim(nbar, 1e-14), tol=1e-14)
diagonal = make_diagonal(4, 5)
print(linear_entropy(thermal), linear_entropy(diagonal))
print(entropy_diagonal(thermal), entropy_diagonal(diagonal))

# %% Thermal/Fock mixtures and where their entropy peaks
spec = MixtureSpec(beta=10.0, M=10, z=0.3)
mix = make_mixture(spec, 16)
print(nbar_from_beta(10.0), mean_photon(mix), fidelity(make_fock(10, 16), mix))
print(zmax_scan(0.4, 10, np.linspace(0, 1, 101)))
