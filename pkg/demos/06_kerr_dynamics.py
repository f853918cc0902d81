# %% [markdown]
# # Kerr oscillator: roughness and distance from classical flow
#
# A coherent state evolves under H = omega n + lam n^2. R(t) rises from
# 1/sqrt(6) as the state shears into a crescent, and returns at the
# revival t = pi / lam. D(t) compares the Husimi function with the
# Liouville-evolved classical density that starts from it.

# %%
import math

import numpy as np

from qroughness import KerrParams, dynamics_grid, rd_correlation, trajectory, write_trajectory_csv

params = KerrParams(omega=0.0, lam=1.0)
times = np.linspace(0, math.pi, 41)

# %%
runs = {alpha: trajectory(alpha, params, times, grid=dynamics_grid(alpha, 192)) for alpha in (0.3, 2.0)}
print("   t     R(0.3)   D(0.3)   R(2)     D(2)")
for a, b in zip(runs[0.3], runs[2.0]):
    print(f"{a.t:.3f}  {a.roughness:.4f}  {a.ddm:.4f}  {b.roughness:.4f}  {b.ddm:.4f}")

# %% Correlation of R and D after the growth phase
print(rd_correlation(runs[2.0], t_min=1.0))
write_trajectory_csv(runs[2.0], "/tmp/kerr_alpha2.csv")
