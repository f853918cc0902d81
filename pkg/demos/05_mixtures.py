# %% [markdown]
# # Thermal noise added to a Fock state
#
# rho_z = (1 - z) rho_beta + z |M><M|. For a cold reservoir the roughness
# first dips below its z = 0 value before rising; for a hot reservoir it
# rises monotonically while the negativity does not track it.

# %%
import numpy as np

from qroughness import PhaseSpaceGrid
from qroughness.cli import _mixture_radius, mixture_rows

dim, M = 64, 10
zs = np.linspace(0, 1, 11)
grid = PhaseSpaceGrid.square(_mixture_radius([0.4, 10.0], M, [dim, dim]), 256)

# %%
rows = {beta: mixture_rows(beta, M, zs, dim, grid) for beta in (0.4, 10.0)}
print("   z    R(b=10)  N(b=10)  R(b=0.4)  N(b=0.4)")
for cold, hot in zip(rows[10.0], rows[0.4]):
    print(f"{cold[0]:.1f}  {cold[1]:.4f}  {cold[2]:.4f}  {hot[1]:.4f}  {hot[2]:.4f}")

# %% The same table is available from the command line:
#   qroughness sweep --family mixture --beta 0.4,10 --M 10 --count 11
#   qroughness mixture-diff --beta 0.4,10 --M 10
