"""Smooth dyadic frequency decomposition on the torus.

A radial bump ``phi`` with ``phi = 1`` on ``|xi| <= 1`` and ``phi = 0`` on
``|xi| >= 2`` defines the low-pass filter ``phi(|xi|)`` and the band filters
``psi(2^-j |xi|)`` with ``psi(r) = phi(r) - phi(2r)``.  Their sum telescopes to
one on every resolved frequency.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .spectral_core import (
    SpaceTimeField,
    SpectralField,
    TorusGrid,
    frames_from_spectral,
    spectral_frames,
)

PROFILE_KINDS = ("smooth_exponential", "polynomial_C2")


def _h(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = np.exp(-1.0 / x[pos])
    return out


def _smooth_exponential(r: np.ndarray) -> np.ndarray:
    out = np.where(r <= 1.0, 1.0, 0.0)
    mid = (r > 1.0) & (r < 2.0)
    a = _h(2.0 - r[mid])
    b = _h(r[mid] - 1.0)
    out[mid] = a / (a + b)
    return out


def _polynomial_c2(r: np.ndarray) -> np.ndarray:
    # quintic smoothstep in u = r - 1, reversed
    u = np.clip(r - 1.0, 0.0, 1.0)
    out = 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)
    out[r <= 1.0] = 1.0
    out[r >= 2.0] = 0.0
    return out


_PROFILES: dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "smooth_exponential": _smooth_exponential,
    "polynomial_C2": _polynomial_c2,
}


@dataclass(frozen=True)
class BumpProfile:
    """Radial cutoff ``phi(r)``; call it on an array of radii."""

    kind: str = "smooth_exponential"

    def __post_init__(self):
        if self.kind not in _PROFILES:
            raise ValueError(f"unknown profile kind {self.kind!r}; choose from {PROFILE_KINDS}")

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return _PROFILES[self.kind](np.atleast_1d(r)).reshape(r.shape)

    def psi(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        return self(r) - self(2.0 * r)


def make_profile(kind: str = "smooth_exponential") -> BumpProfile:
    return BumpProfile(kind)


class BandRangeError(ValueError):
    pass


@dataclass(frozen=True)
class FilterBank:
    """Sampled low-pass and dyadic band filters for one grid.

    ``band_filters[j - 1]`` holds ``psi(2^-j |xi|)`` for ``j = 1..j_max``.
    """

    grid: TorusGrid
    profile: BumpProfile
    j_max: int
    s0_filter: np.ndarray = field(repr=False)
    band_filters: np.ndarray = field(repr=False)

    def band(self, j: int) -> np.ndarray:
        if not 1 <= j <= self.j_max:
            raise BandRangeError(f"band index j={j} outside 1..{self.j_max}")
        return self.band_filters[j - 1]

    @property
    def resolved_radius(self) -> float:
        """Frequencies with ``|xi|`` up to this radius are fully decomposed."""
        return 2.0**self.j_max


def max_band_index(grid: TorusGrid) -> int:
    return int(math.floor(math.log2(grid.nyquist_radius))) - 1


def build_filter_bank(grid: TorusGrid, profile: BumpProfile | None = None) -> FilterBank:
    """Sample the filters on ``grid``.

    Only bands whose support ``2^(j-1) <= |xi| <= 2^(j+1)`` fits below the
    Nyquist radius are kept; at least two are required.
    """
    profile = profile or BumpProfile()
    j_max = max_band_index(grid)
    if j_max < 2:
        raise ValueError(
            f"grid {grid} resolves only {max(j_max, 0)} dyadic band(s); need at least 2 "
            f"(N >= 16 on the unit torus)"
        )
    r = grid.frequency_norm
    levels = [profile(r * 2.0**-j) for j in range(0, j_max + 1)]
    bands = np.stack([levels[j] - levels[j - 1] for j in range(1, j_max + 1)])
    s0 = levels[0]
    for a in (s0, bands):
        a.setflags(write=False)
    return FilterBank(grid, profile, j_max, s0, bands)


def _check(field: SpectralField, bank: FilterBank) -> None:
    bank.grid.check_same(field.grid)


def s0(field: SpectralField, bank: FilterBank) -> SpectralField:
    _check(field, bank)
    return SpectralField(field.grid, bank.s0_filter * field.coeffs)


def delta_j(field: SpectralField, j: int, bank: FilterBank) -> SpectralField:
    _check(field, bank)
    return SpectralField(field.grid, bank.band(j) * field.coeffs)


def partition_residual(bank: FilterBank) -> float:
    """Max of ``|phi + sum_j psi_j - 1|`` over lattice points with ``|xi| <= 2^j_max``."""
    total = bank.s0_filter.copy()
    for b in bank.band_filters:
        total = total + b
    mask = bank.grid.frequency_norm <= bank.resolved_radius
    return float(np.max(np.abs(total[mask] - 1.0)))


def band_overlap_check(field: SpaceTimeField, j: int, alpha: float, operator=None,
                       bank: FilterBank | None = None) -> float:
    """Relative residual of ``D_j T f`` against ``D_j T (D_{j-1} + D_j + D_{j+1}) f``.

    ``operator(field, alpha)`` defaults to the Duhamel map.  The result is the
    max over frames of the L2 distance, divided by the max frame L2 norm of
    ``D_j T f`` (absolute if that vanishes).
    """
    if operator is None:
        from .frac_heat import duhamel_apply as operator
    bank = bank or build_filter_bank(field.grid)
    bank.grid.check_same(field.grid)
    if not 2 <= j <= bank.j_max - 1:
        raise BandRangeError(f"overlap check needs 2 <= j <= {bank.j_max - 1}, got {j}")
    g = field.grid
    fhat = spectral_frames(field)
    near = bank.band(j - 1) + bank.band(j) + bank.band(j + 1)
    restricted = frames_from_spectral(g, field.t_final, near * fhat)
    lhs = bank.band(j) * spectral_frames(operator(field, alpha))
    rhs = bank.band(j) * spectral_frames(operator(restricted, alpha))
    # Parseval: L2 distance of frames from coefficient distance
    scale = g.side_length ** (-g.dim / 2.0)
    diff = scale * np.sqrt(np.sum(np.abs(lhs - rhs) ** 2, axis=g.axes))
    ref = scale * np.sqrt(np.sum(np.abs(lhs) ** 2, axis=g.axes))
    top = float(np.max(ref))
    return float(np.max(diff)) / top if top > 0 else float(np.max(diff))


def write_bank_csv(path, bank: FilterBank) -> None:
    g = bank.grid
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"k{a}" for a in range(g.dim)] + ["xi_norm", "phi"]
                   + [f"psi_{j}" for j in range(1, bank.j_max + 1)])
        lattice = g.lattice.reshape(g.dim, -1).T
        r = g.frequency_norm.ravel()
        phi = bank.s0_filter.ravel()
        bands = bank.band_filters.reshape(bank.j_max, -1)
        for i in np.argsort(r, kind="stable"):
            w.writerow([*map(int, lattice[i]), repr(float(r[i])), repr(float(phi[i]))]
                       + [repr(float(b)) for b in bands[:, i]])
