# %% [markdown]
# # Special functions behind the Fock-basis kernels
#
# Associated Laguerre polynomials build the Wigner function of a Fock
# dyad; Stirling numbers and binomial-square polynomials show up in the
# closed form of the Fock cross term.

# %%
import math
from fractions import Fraction

import numpy as np
from scipy import special

from qroughness import (
    assoc_laguerre,
    binom_square_poly,
    bn_ratio_exact,
    central_binom_bounds,
    central_binom_scaled,
    stirling_first_unsigned,
    stirling_identity_lhs,
    stirling_second,
)

# %% Laguerre values agree with scipy's
x = np.linspace(0, 30, 7)
print(assoc_laguerre(12, 3, x))
print(special.eval_genlaguerre(12, 3, x))

# %% Small Stirling triangles
for n in range(6):
    print(n, [stirling_first_unsigned(n, k) for k in range(n + 1)], [stirling_second(n, k) for k in range(n + 1)])

# %% The identity sum_k [n+1, k+1]{k, j} = (n-j)! C(n, j)^2 holds exactly
for n, j in [(3, 0), (3, 3), (10, 4), (25, 12)]:
    print(n, j, stirling_identity_lhs(n, j), math.factorial(n - j) * math.comb(n, j) ** 2)

# %% P_n(2) / 9^n against the central binomial: the ratio B_n falls from 10/9
print(binom_square_poly(4, Fraction(2)))
for n in (0, 1, 2, 5, 20, 100):
    print(n, float(bn_ratio_exact(n)))

# %% Stirling-type bounds sandwich 2^-2n C(2n, n)
for n in (1, 10, 100):
    lo, hi = central_binom_bounds(n)
    print(n, lo, central_binom_scaled(n), hi)
