"""Discrete Triebel-Lizorkin and Bessel-potential norms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .littlewood_paley import FilterBank
from .spectral_core import (
    RealField,
    SpaceTimeField,
    TorusGrid,
    _lp,
    forward_transform,
    spectral_frames,
    time_lp,
)


@dataclass(frozen=True)
class TLIndex:
    """Smoothness ``s``, integrability ``p`` and fine index ``q`` of F^{p,q}_s."""

    s: float
    p: float
    q: float

    def __post_init__(self):
        if not (1 <= self.p < math.inf):
            raise ValueError(f"p must lie in [1, inf), got {self.p}")
        if not (1 <= self.q <= math.inf):
            raise ValueError(f"q must lie in [1, inf], got {self.q}")
        if not math.isfinite(self.s):
            raise ValueError(f"s must be finite, got {self.s}")

    @property
    def in_theorem_range(self) -> bool:
        """True when ``2 <= q <= p < inf``."""
        return 2 <= self.q <= self.p

    def shifted(self, ds: float) -> "TLIndex":
        return TLIndex(self.s + ds, self.p, self.q)


def _physical(grid: TorusGrid, coeffs: np.ndarray) -> np.ndarray:
    scale = (grid.points_per_axis / grid.side_length) ** grid.dim
    return scale * np.fft.ifftn(coeffs, axes=grid.axes)


def tl_norms_from_coeffs(coeffs: np.ndarray, idx: TLIndex, bank: FilterBank) -> np.ndarray:
    """TL norm of each field in a batch of coefficient arrays.

    ``coeffs`` has shape ``(..., *grid.shape)``; the result drops the spatial
    axes.
    """
    g = bank.grid
    low = _lp(_physical(g, bank.s0_filter * coeffs), idx.p, g.cell_volume, g.axes)
    weights = 2.0 ** (idx.s * np.arange(1, bank.j_max + 1))
    # band axis goes in front of the batch axes
    pieces = np.abs(_physical(g, bank.band_filters.reshape(
        (bank.j_max,) + (1,) * (coeffs.ndim - g.dim) + g.shape) * coeffs))
    pieces *= weights.reshape((bank.j_max,) + (1,) * coeffs.ndim)
    if math.isinf(idx.q):
        agg = np.max(pieces, axis=0)
    elif idx.q == 2:
        agg = np.sqrt(np.sum(pieces * pieces, axis=0))
    else:
        agg = np.sum(pieces**idx.q, axis=0) ** (1.0 / idx.q)
    return low + _lp(agg, idx.p, g.cell_volume, g.axes)


def tl_norm(field: RealField, idx: TLIndex, bank: FilterBank) -> float:
    """``||S_0 f||_p + || (sum_j (2^{js} |D_j f|)^q)^{1/q} ||_p`` over ``j = 1..j_max``."""
    bank.grid.check_same(field.grid)
    return float(tl_norms_from_coeffs(forward_transform(field).coeffs, idx, bank))


def frame_tl_norms(field: SpaceTimeField, idx: TLIndex, bank: FilterBank,
                   coeffs: np.ndarray | None = None) -> np.ndarray:
    """Per-frame TL norms; ``coeffs`` may pass precomputed frame spectra."""
    bank.grid.check_same(field.grid)
    if coeffs is None:
        coeffs = spectral_frames(field)
    chunk = max(1, 2**22 // (bank.grid.size * bank.j_max))
    return np.concatenate([
        tl_norms_from_coeffs(coeffs[i:i + chunk], idx, bank)
        for i in range(0, coeffs.shape[0], chunk)
    ])


def space_time_tl_norm(field: SpaceTimeField, idx: TLIndex, bank: FilterBank,
                       coeffs: np.ndarray | None = None) -> float:
    """``((T/M) sum_{n>=1} ||f(t_n)||_F^p)^{1/p}`` with the right-endpoint rule."""
    return time_lp(frame_tl_norms(field, idx, bank, coeffs), idx.p, field.t_final)


def bessel_multiplier(grid: TorusGrid, s: float) -> np.ndarray:
    return (1.0 + (2.0 * np.pi * grid.frequency_norm) ** 2) ** (s / 2.0)


def bessel_sobolev_norm(field: RealField, s: float, p: float) -> float:
    """L^p norm of ``(1 + |2 pi xi|^2)^{s/2} fhat`` transformed back."""
    if not (1 < p < math.inf):
        raise ValueError(f"p must lie in (1, inf), got {p}")
    g = field.grid
    coeffs = bessel_multiplier(g, s) * forward_transform(field).coeffs
    return float(_lp(_physical(g, coeffs), p, g.cell_volume, None))
