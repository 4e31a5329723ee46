"""Rademacher sums and an exact Khinchine check."""

# %%
import numpy as np

from fractl import khinchine_exact, rademacher_value
from fractl.rademacher import khinchine_survey

z = np.array([0.1, 0.3, 0.6, 0.9])
for j in (1, 2, 3):
    print(f"r_{j}({z.tolist()}) =", rademacher_value(j, z).tolist())

# %%
# The first n Rademacher functions are constant on dyadic cells of length
# 2^-n, so the z-integral is an average over 2^n sign vectors.
for n in (2, 5, 10):
    rep = khinchine_exact(np.ones(n), 4)
    print(f"n={n:2d}: integral {rep.integral:.0f} = 3n^2 - 2n = {3 * n * n - 2 * n}")

# %%
# Random complex coefficients: the ratio to (sum |c_j|^2)^{p/2} is exactly 1
# at p = 2 and stays within fixed constants for larger p.
rng = np.random.default_rng(7)
c = rng.standard_normal(12) + 1j * rng.standard_normal(12)
print("p=2 ratio:", khinchine_exact(c, 2).ratio_low)
for p in (4, 6):
    sv = khinchine_survey(p, 200, seed=p)
    print(f"p={p}: observed [{sv.ratio_low:.3f}, {sv.ratio_high:.3f}] "
          f"inside [{sv.lower_bound:.3f}, {sv.upper_bound:.1f}]: {sv.inside}")
