"""Fields on the periodic torus: transforms, multipliers and discrete norms."""

# %%
import tempfile
from pathlib import Path

import numpy as np

from fractl import RealField, TorusGrid, apply_multiplier, forward_transform, inverse_transform, lp_norm
from fractl.fieldio import read_snapshot, write_snapshot

# A grid is the torus [0, L)^d sampled at N points per axis.  Lattice
# frequencies are k/L in FFT order.
grid = TorusGrid(dim=1, points_per_axis=64, side_length=2.0)
print(grid, "spacing", grid.spacing)
print("first lattice indices:", grid.lattice[0][:6], "...", grid.lattice[0][-3:])

# %%
# Coefficients are scaled so that a single exponential e^{2 pi i k x / L}
# carries coefficient L at index k.
x = grid.coordinates[0]
f = RealField(grid, np.cos(2 * np.pi * 3 * x / 2.0) + 0.25 * np.sin(2 * np.pi * 7 * x / 2.0))
fhat = forward_transform(f)
print("coefficient at k=3:", fhat.coefficient((3,)))
print("real field has a conjugate-symmetric spectrum:", fhat.is_conjugate_symmetric())

# %%
# Parseval: ||f||_2^2 = L^{-d} sum |fhat|^2, and the round trip is exact to rounding.
lhs = lp_norm(f, 2) ** 2
rhs = np.sum(np.abs(fhat.coeffs) ** 2) / grid.side_length
print(f"Parseval: {lhs:.15f} vs {rhs:.15f}")
print("round-trip error:", np.max(np.abs(inverse_transform(fhat).values - f.values)))

# %%
# Multipliers are arrays or callables of the frequency vector xi.  Here the
# derivative symbol 2 pi i xi.
df = inverse_transform(apply_multiplier(fhat, lambda xi: 2j * np.pi * xi[0])).values.real
exact = -np.pi * 3 * np.sin(2 * np.pi * 3 * x / 2.0) + 0.25 * np.pi * 7 * np.cos(2 * np.pi * 7 * x / 2.0)
print("spectral derivative error:", np.max(np.abs(df - exact)))

# %%
# Snapshots are a small binary format with the grid in the header.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "f.fsf"
    write_snapshot(path, f)
    g = read_snapshot(path)
    print("snapshot bytes:", path.stat().st_size, "identical:", np.array_equal(g.values, f.values))
