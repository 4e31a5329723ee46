"""Periodic grids, Fourier transforms and Riemann-sum norms.

The torus is ``[0, L)^d`` sampled at ``N`` points per axis.  Coefficients are
stored in numpy FFT order, so the integer lattice index along each axis runs
``0, 1, ..., N/2-1, -N/2, ..., -1`` (``np.fft.fftfreq(N, 1/N)``).

Transform convention (the ``e^{-2 pi i xi.x}`` convention on R^d, restricted to
the lattice ``xi = k/L``)::

    fhat(k) = (L/N)^d  sum_x f(x) exp(-2 pi i k.x / L)
    f(x)    = L^{-d}   sum_k fhat(k) exp(+2 pi i k.x / L)

With this choice the heat multiplier is exactly ``exp(-t |xi|^alpha)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

__all__ = [
    "TorusGrid",
    "RealField",
    "SpectralField",
    "SpaceTimeField",
    "GridMismatchError",
    "forward_transform",
    "inverse_transform",
    "apply_multiplier",
    "lp_norm",
    "space_time_lp_norm",
    "frame_lp_norms",
    "time_lp",
    "spectral_frames",
    "frames_from_spectral",
]


class GridMismatchError(ValueError):
    """Raised when two objects that must share a grid do not."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid on the torus ``[0, side_length)^dim``.

    Parameters
    ----------
    dim : int
        Spatial dimension, 1 or 2.
    points_per_axis : int
        Even number of samples per axis, at least 8.
    side_length : float
        Period ``L`` of each axis.
    """

    dim: int
    points_per_axis: int
    side_length: float = 1.0

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        n = self.points_per_axis
        if int(n) != n or n < 8 or n % 2:
            raise ValueError(f"points_per_axis must be an even integer >= 8, got {n}")
        if not (np.isfinite(self.side_length) and self.side_length > 0):
            raise ValueError(f"side_length must be positive, got {self.side_length}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def size(self) -> int:
        return self.points_per_axis**self.dim

    @property
    def spacing(self) -> float:
        return self.side_length / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def nyquist_radius(self) -> float:
        return self.points_per_axis / (2.0 * self.side_length)

    @property
    def axes(self) -> tuple[int, ...]:
        """Trailing array axes that carry space (for batched arrays)."""
        return tuple(range(-self.dim, 0))

    @cached_property
    def lattice(self) -> np.ndarray:
        """Integer frequency indices, shape ``(dim, N, ..., N)``."""
        k1 = np.fft.fftfreq(self.points_per_axis, d=1.0 / self.points_per_axis)
        k1 = np.rint(k1).astype(np.int64)
        return _frozen(np.stack(np.meshgrid(*([k1] * self.dim), indexing="ij")))

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Physical frequencies ``xi = k/L``, shape ``(dim, N, ..., N)``."""
        return _frozen(self.lattice / self.side_length)

    @cached_property
    def frequency_norm(self) -> np.ndarray:
        """Euclidean ``|xi|`` on the lattice, shape ``grid.shape``."""
        return _frozen(np.sqrt(np.sum(self.frequencies**2, axis=0)))

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Sample points, shape ``(dim, N, ..., N)``."""
        x1 = np.arange(self.points_per_axis) * self.spacing
        return _frozen(np.stack(np.meshgrid(*([x1] * self.dim), indexing="ij")))

    def check_same(self, other: "TorusGrid") -> None:
        if self != other:
            raise GridMismatchError(f"grid mismatch: {self} vs {other}")


def _check_values(grid: TorusGrid, values: np.ndarray, what: str) -> np.ndarray:
    values = np.asarray(values)
    if values.size != grid.size:
        raise ValueError(f"{what} has {values.size} entries, expected {grid.size}")
    return _frozen(values.reshape(grid.shape))


@dataclass(frozen=True)
class RealField:
    """Samples of a function on the grid (real or complex valued)."""

    grid: TorusGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "values", _check_values(self.grid, self.values, "values"))

    def __add__(self, other: "RealField") -> "RealField":
        self.grid.check_same(other.grid)
        return RealField(self.grid, self.values + other.values)

    def __mul__(self, c) -> "RealField":
        return RealField(self.grid, c * self.values)

    __rmul__ = __mul__


@dataclass(frozen=True)
class SpectralField:
    """Fourier coefficients on the lattice, stored in FFT order."""

    grid: TorusGrid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", _check_values(self.grid, np.asarray(self.coeffs, dtype=complex), "coeffs")
        )

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self.grid.check_same(other.grid)
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __mul__(self, c) -> "SpectralField":
        return SpectralField(self.grid, c * self.coeffs)

    __rmul__ = __mul__

    def coefficient(self, k) -> complex:
        """Coefficient at integer lattice index ``k`` (scalar or tuple)."""
        idx = tuple(int(ki) % self.grid.points_per_axis for ki in np.atleast_1d(k))
        return complex(self.coeffs[idx])

    def is_conjugate_symmetric(self, rtol: float = 1e-12) -> bool:
        flipped = np.conj(_negate_lattice(self.coeffs, self.grid.dim))
        scale = max(np.max(np.abs(self.coeffs)), np.finfo(float).tiny)
        return bool(np.max(np.abs(self.coeffs - flipped)) <= rtol * scale)


def _negate_lattice(a: np.ndarray, dim: int) -> np.ndarray:
    """Return ``a(-k)`` for an FFT-ordered array (last ``dim`` axes)."""
    axes = tuple(range(-dim, 0))
    return np.roll(np.flip(a, axis=axes), shift=1, axis=axes)


@dataclass(frozen=True)
class SpaceTimeField:
    """Frames ``f(t_n, .)`` at ``t_n = n T / M`` for ``n = 0..M``."""

    grid: TorusGrid
    t_final: float
    frames: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (np.isfinite(self.t_final) and self.t_final > 0):
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        frames = np.asarray(self.frames)
        if frames.ndim != self.grid.dim + 1 or frames.shape[1:] != self.grid.shape:
            raise ValueError(
                f"frames must have shape (M+1, {self.grid.shape}), got {frames.shape}"
            )
        if frames.shape[0] < 2:
            raise ValueError("need at least two frames (M >= 1)")
        object.__setattr__(self, "frames", _frozen(frames))

    @property
    def steps(self) -> int:
        return self.frames.shape[0] - 1

    @property
    def dt(self) -> float:
        return self.t_final / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, self.steps + 1)

    def frame(self, n: int) -> RealField:
        return RealField(self.grid, self.frames[n])

    def __mul__(self, c) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.t_final, c * self.frames)

    __rmul__ = __mul__


def forward_transform(field: RealField) -> SpectralField:
    g = field.grid
    return SpectralField(g, g.cell_volume * np.fft.fftn(field.values))


def inverse_transform(field: SpectralField) -> RealField:
    g = field.grid
    scale = (g.points_per_axis / g.side_length) ** g.dim
    return RealField(g, scale * np.fft.ifftn(field.coeffs))


def spectral_frames(field: SpaceTimeField) -> np.ndarray:
    """Coefficients of every frame, shape ``(M+1, *grid.shape)``."""
    g = field.grid
    return g.cell_volume * np.fft.fftn(field.frames, axes=g.axes)


def frames_from_spectral(grid: TorusGrid, t_final: float, coeffs: np.ndarray,
                         real: bool | None = None) -> SpaceTimeField:
    """Inverse of :func:`spectral_frames`.

    If ``real`` is True the imaginary part is dropped; if None it is dropped
    only when it is at rounding level.
    """
    scale = (grid.points_per_axis / grid.side_length) ** grid.dim
    values = scale * np.fft.ifftn(coeffs, axes=grid.axes)
    if real is None:
        mag = np.max(np.abs(values)) if values.size else 0.0
        real = bool(np.max(np.abs(values.imag)) <= 1e-13 * max(mag, 1e-300))
    if real:
        values = values.real
    return SpaceTimeField(grid, t_final, values)


def apply_multiplier(field: SpectralField, m: Callable[[np.ndarray], np.ndarray] | np.ndarray) -> SpectralField:
    """Multiply coefficients by ``m(xi)``.

    ``m`` is either an array of shape ``grid.shape`` (FFT order) or a
    vectorised callable receiving ``xi`` with shape ``(dim, *grid.shape)``.
    """
    g = field.grid
    values = m(g.frequencies) if callable(m) else m
    values = np.broadcast_to(np.asarray(values), g.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        first = tuple(int(i) for i in np.argwhere(bad)[0])
        k = tuple(int(c) for c in g.lattice[(slice(None),) + first])
        raise ValueError(f"multiplier is not finite at lattice frequency k={k}")
    return SpectralField(g, values * field.coeffs)


def _lp(values: np.ndarray, p: float, cell_volume: float, axes) -> np.ndarray:
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a = np.abs(values)
    if np.isinf(p):
        return np.max(a, axis=axes)
    if p == 2:
        return np.sqrt(cell_volume * np.sum(a * a, axis=axes))
    return (cell_volume * np.sum(a**p, axis=axes)) ** (1.0 / p)


def lp_norm(field: RealField, p: float) -> float:
    """Riemann-sum L^p norm; ``p = inf`` gives the max of ``|f|``."""
    return float(_lp(field.values, p, field.grid.cell_volume, None))


def frame_lp_norms(field: SpaceTimeField, p: float) -> np.ndarray:
    """Spatial L^p norm of each frame."""
    g = field.grid
    return _lp(field.frames, p, g.cell_volume, g.axes)


def time_lp(per_frame: np.ndarray, p: float, t_final: float) -> float:
    """Right-endpoint rule ``((T/M) sum_{n>=1} a_n^p)^{1/p}`` over frame norms."""
    per_frame = np.asarray(per_frame, dtype=float)
    m = per_frame.shape[0] - 1
    if m < 1:
        raise ValueError("need at least two frames")
    return float(_lp(per_frame[1:], p, t_final / m, None))


def space_time_lp_norm(field: SpaceTimeField, p: float,
                       spatial_norm: Callable[[RealField], float] | None = None) -> float:
    """``((T/M) sum_{n=1..M} spatial_norm(frame_n)^p)^{1/p}``.

    ``spatial_norm`` defaults to the spatial L^p norm.
    """
    if spatial_norm is None:
        per = frame_lp_norms(field, p)
    else:
        per = np.array([spatial_norm(field.frame(n)) for n in range(field.steps + 1)])
    return time_lp(per, p, field.t_final)
