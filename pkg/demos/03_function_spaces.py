"""Triebel-Lizorkin norms and their comparison with Bessel-potential norms."""

# %%
import math

import numpy as np

from fractl import RealField, TLIndex, TorusGrid, bessel_sobolev_norm, build_filter_bank, tl_norm

grid = TorusGrid(1, 128)
bank = build_filter_bank(grid)
x = grid.coordinates[0]

# A unit exponential at the centre of band j has TL norm 2^{js}: only one band
# sees it and its modulus is 1 everywhere.
for j in (2, 4):
    f = RealField(grid, np.exp(2j * np.pi * 2**j * x))
    print(f"mode 2^{j}:", [round(tl_norm(f, TLIndex(s, 2, 2), bank), 12) for s in (0, 0.5, 1)])

# %%
# For a fixed field the norm cannot increase as q grows.
rng = np.random.default_rng(1)
c = rng.standard_normal(128) * (1 + grid.frequency_norm) ** -0.5
c[grid.frequency_norm > bank.resolved_radius] = 0
f = RealField(grid, np.fft.ifft(c).real * 128)
for q in (1, 2, 4, math.inf):
    print(f"q={q}: {tl_norm(f, TLIndex(0.5, 3, q), bank):.6f}")

# %%
# F^{p,2}_s and the Bessel-potential norm are equivalent; the ratio stays in a
# bounded window that depends on the profile and on s.
for s in (0.0, 1.0):
    print(f"s={s}: F/Bessel = {tl_norm(f, TLIndex(s, 4, 2), bank) / bessel_sobolev_norm(f, s, 4):.4f}")
