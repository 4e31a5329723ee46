"""Dyadic frequency bands: the bump profiles and the partition of unity."""

# %%
import numpy as np

from fractl import (
    BumpProfile,
    RealField,
    SpectralField,
    TorusGrid,
    build_filter_bank,
    delta_j,
    forward_transform,
    inverse_transform,
    lp_norm,
    partition_residual,
    s0,
)
from fractl.littlewood_paley import PROFILE_KINDS

# Two radial profiles are available.  Both equal 1 on r <= 1 and vanish for r >= 2.
r = np.linspace(0.8, 2.2, 8)
for kind in PROFILE_KINDS:
    print(f"{kind:>20}:", np.round(BumpProfile(kind)(r), 4))

# %%
# The number of bands depends on how many dyadic shells fit below the Nyquist
# radius N / (2L); the last band must not touch it.
for n in (16, 64, 256, 1024):
    bank = build_filter_bank(TorusGrid(1, n))
    print(f"N={n:5d}: j_max={bank.j_max}, partition residual={partition_residual(bank):.1e}")

# %%
# Split a band-limited random field into its low-pass part and dyadic bands.
grid = TorusGrid(2, 64)
bank = build_filter_bank(grid, BumpProfile("polynomial_C2"))
rng = np.random.default_rng(0)
c = forward_transform(RealField(grid, rng.standard_normal(grid.shape))).coeffs.copy()
c[grid.frequency_norm > bank.resolved_radius] = 0
fhat = SpectralField(grid, c)
parts = [s0(fhat, bank)] + [delta_j(fhat, j, bank) for j in range(1, bank.j_max + 1)]
for j, part in enumerate(parts):
    print(f"band {j}: L2 norm {lp_norm(inverse_transform(part), 2):.4f}")
total = sum(p.coeffs for p in parts)
print("reconstruction error:", np.max(np.abs(total - fhat.coeffs)))
