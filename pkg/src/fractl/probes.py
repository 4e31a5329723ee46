"""Probe fields and measurements of the smoothing ratio.

For a probe ``f`` on ``[0, T] x torus`` the measured ratio is::

    ||T^alpha f||_{L^p F^{p,q}_{s + alpha/p}} / ||f||_{L^p F^{p,q}_s}

Probes are generated with ``numpy.random.default_rng((seed, kind_code))``
(PCG64), so a ``ProbeSpec`` plus grid fully determine the field.
"""

from __future__ import annotations

import dataclasses
import functools
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .frac_heat import check_alpha, decay_bound_report, duhamel_coeffs
from .function_spaces import TLIndex
from .littlewood_paley import BumpProfile, FilterBank
from .spectral_core import SpaceTimeField, TorusGrid, _lp, _negate_lattice, spectral_frames, time_lp

PROBE_KINDS = ("single_mode", "single_band", "lacunary", "white_noise", "time_modulated")
TIME_PROFILES = ("constant", "step", "oscillating")
DEGENERATE_NORM = 1e-12


class ProbeError(ValueError):
    pass


class DegenerateProbeError(ValueError):
    pass


@dataclass(frozen=True)
class ProbeSpec:
    """Recipe for a deterministic probe.

    ``band`` selects the dyadic band for ``single_band`` and the default mode
    ``2^band`` for ``single_mode``; ``mode`` overrides it with an explicit
    lattice index.  ``omega`` is the time frequency of the oscillating profile
    (and the base frequency of ``time_modulated``).
    """

    kind: str
    band: int | None = None
    mode: tuple[int, ...] | None = None
    time_profile: str = "constant"
    omega: float = 1.0
    seed: int = 0
    normalize: bool = False

    def __post_init__(self):
        if self.kind not in PROBE_KINDS:
            raise ProbeError(f"unknown probe kind {self.kind!r}")
        if self.time_profile not in TIME_PROFILES:
            raise ProbeError(f"unknown time profile {self.time_profile!r}")
        if self.mode is not None:
            object.__setattr__(self, "mode", tuple(int(k) for k in np.atleast_1d(self.mode)))
        if not 0 <= self.seed < 2**64:
            raise ProbeError("seed must fit in 64 bits")

    def digest(self) -> str:
        blob = json.dumps(dataclasses.asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _time_factor(spec: ProbeSpec, times: np.ndarray, t_final: float) -> np.ndarray:
    if spec.time_profile == "constant":
        return np.ones_like(times)
    if spec.time_profile == "step":
        return np.where(times < 0.5 * t_final, 1.0, 0.0)
    return np.cos(2.0 * np.pi * spec.omega * times)


def _band_coeffs(rng, grid: TorusGrid, bank: FilterBank, j: int) -> np.ndarray:
    """Complex Gaussians on the resolved part of the band support, symmetrised so the field is real."""
    support = (bank.band(j) > 0) & (grid.frequency_norm <= bank.resolved_radius)
    z = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    z = np.where(support, z, 0.0)
    return 0.5 * (z + np.conj(_negate_lattice(z, grid.dim)))


def _mode_index(grid: TorusGrid, mode) -> tuple[int, ...]:
    mode = tuple(mode) + (0,) * (grid.dim - len(mode))
    if len(mode) != grid.dim:
        raise ProbeError(f"mode {mode} does not match dimension {grid.dim}")
    return mode


def _single_mode_coeffs(grid: TorusGrid, bank: FilterBank, mode) -> np.ndarray:
    k = _mode_index(grid, mode)
    if math.hypot(*k) / grid.side_length > bank.resolved_radius:
        raise ProbeError(f"mode {k} lies outside |xi| <= 2^{bank.j_max}")
    c = np.zeros(grid.shape, dtype=complex)
    c[tuple(ki % grid.points_per_axis for ki in k)] = grid.side_length**grid.dim
    return c


def _spatial_parts(spec: ProbeSpec, grid: TorusGrid, bank: FilterBank, rng):
    """Coefficient arrays and per-part time frequencies (None = use spec profile)."""
    if spec.kind == "single_mode":
        mode = spec.mode if spec.mode is not None else (2 ** (spec.band or 1),)
        return [(_single_mode_coeffs(grid, bank, mode), None)]
    if spec.kind == "single_band":
        j = spec.band or 1
        return [(_band_coeffs(rng, grid, bank, j), None)]
    if spec.kind == "lacunary":
        if not float(grid.side_length).is_integer():
            raise ProbeError("lacunary probes need an integer side length")
        total = sum(_single_mode_coeffs(grid, bank, (2**j * int(grid.side_length),))
                    for j in range(1, bank.j_max + 1))
        return [(total, None)]
    if spec.kind == "white_noise":
        values = rng.standard_normal(grid.shape)
        c = grid.cell_volume * np.fft.fftn(values)
        c[grid.frequency_norm > bank.resolved_radius] = 0.0
        return [(c, None)]
    # time_modulated: band j oscillates at omega * 2^j with a random phase
    parts = []
    for j in range(1, bank.j_max + 1):
        phase = rng.uniform(0.0, 2.0 * np.pi)
        parts.append((_band_coeffs(rng, grid, bank, j), (spec.omega * 2.0**j, phase)))
    return parts


def generate_probe(spec: ProbeSpec, grid: TorusGrid, bank: FilterBank, steps: int,
                   t_final: float, idx: TLIndex | None = None) -> SpaceTimeField:
    """Build the probe frames at ``t_n = n T / M``.

    With ``spec.normalize`` the field is rescaled to unit
    ``L^p F^{p,q}_s`` norm for ``idx``.
    """
    bank.grid.check_same(grid)
    if spec.band is not None and not 1 <= spec.band <= bank.j_max:
        raise ProbeError(f"band {spec.band} outside 1..{bank.j_max} for {grid}")
    if steps < 1:
        raise ProbeError("steps must be >= 1")
    rng = np.random.default_rng((spec.seed, PROBE_KINDS.index(spec.kind)))
    times = np.linspace(0.0, t_final, steps + 1)
    coeffs = np.zeros((steps + 1,) + grid.shape, dtype=complex)
    for c, osc in _spatial_parts(spec, grid, bank, rng):
        if osc is None:
            factor = _time_factor(spec, times, t_final)
        else:
            w, phase = osc
            factor = np.cos(2.0 * np.pi * w * times + phase)
        coeffs += factor.reshape((-1,) + (1,) * grid.dim) * c
    scale = (grid.points_per_axis / grid.side_length) ** grid.dim
    values = scale * np.fft.ifftn(coeffs, axes=grid.axes)
    if spec.kind not in ("single_mode", "lacunary"):
        values = values.real
    f = SpaceTimeField(grid, t_final, values)
    if spec.normalize:
        if idx is None:
            raise ProbeError("normalisation needs a TLIndex")
        from .function_spaces import space_time_tl_norm

        norm = space_time_tl_norm(f, idx, bank)
        if norm < DEGENERATE_NORM:
            raise DegenerateProbeError(f"probe {spec} has norm {norm:.3e}")
        f = f * (1.0 / norm)
    return f


# ---------------------------------------------------------------------------
# norms from band moduli, shared across (s, p, q)


class BandModuli(NamedTuple):
    """``|S_0 f|`` and ``|D_j f|`` for every frame; arrays ``(M+1, ...)`` and ``(J, M+1, ...)``."""

    low: np.ndarray
    bands: np.ndarray


def band_moduli(coeffs: np.ndarray, bank: FilterBank) -> BandModuli:
    g = bank.grid
    scale = (g.points_per_axis / g.side_length) ** g.dim
    low = np.abs(scale * np.fft.ifftn(bank.s0_filter * coeffs, axes=g.axes))
    bands = np.empty((bank.j_max,) + coeffs.shape)
    for j in range(bank.j_max):
        bands[j] = np.abs(scale * np.fft.ifftn(bank.band_filters[j] * coeffs, axes=g.axes))
    return BandModuli(low, bands)


def frame_norms_from_moduli(mod: BandModuli, idx: TLIndex, bank: FilterBank) -> np.ndarray:
    g = bank.grid
    w = 2.0 ** (idx.s * np.arange(1, bank.j_max + 1))
    pieces = mod.bands * w.reshape((-1,) + (1,) * (mod.bands.ndim - 1))
    if math.isinf(idx.q):
        agg = np.max(pieces, axis=0)
    elif idx.q == 2:
        agg = np.sqrt(np.sum(pieces * pieces, axis=0))
    else:
        agg = np.sum(pieces**idx.q, axis=0) ** (1.0 / idx.q)
    return _lp(mod.low, idx.p, g.cell_volume, g.axes) + _lp(agg, idx.p, g.cell_volume, g.axes)


@dataclass
class RatioRecord:
    alpha: float
    s: float
    p: float
    q: float
    dim: int
    N: int
    L: float
    T: float
    M: int
    profile: str
    probe_kind: str
    probe_digest: str
    seed: int
    input_norm: float
    output_norm: float
    ratio: float
    in_hypothesis: bool
    timestamp: str = field(default="", compare=False)


CSV_COLUMNS = tuple(f.name for f in dataclasses.fields(RatioRecord))


def _record(alpha, idx, bank, t_final, steps, probe, in_norm, out_norm) -> RatioRecord:
    if not in_norm >= DEGENERATE_NORM:
        raise DegenerateProbeError(f"input norm {in_norm:.3e} below {DEGENERATE_NORM}")
    g = bank.grid
    return RatioRecord(
        alpha=float(alpha), s=float(idx.s), p=float(idx.p), q=float(idx.q),
        dim=g.dim, N=g.points_per_axis, L=float(g.side_length), T=float(t_final), M=int(steps),
        profile=bank.profile.kind,
        probe_kind=probe.kind if probe else "",
        probe_digest=probe.digest() if probe else "",
        seed=probe.seed if probe else 0,
        input_norm=float(in_norm), output_norm=float(out_norm),
        ratio=float(out_norm / in_norm), in_hypothesis=idx.in_theorem_range,
        timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"),
    )


def measure_ratio(f: SpaceTimeField, alpha: float, idx: TLIndex, bank: FilterBank,
                  probe: ProbeSpec | None = None) -> RatioRecord:
    """Ratio of the output norm at smoothness ``s + alpha/p`` to the input norm at ``s``."""
    check_alpha(alpha)
    bank.grid.check_same(f.grid)
    fhat = spectral_frames(f)
    mod_in = band_moduli(fhat, bank)
    in_norm = time_lp(frame_norms_from_moduli(mod_in, idx, bank), idx.p, f.t_final)
    if not in_norm >= DEGENERATE_NORM:
        raise DegenerateProbeError(f"input norm {in_norm:.3e} below {DEGENERATE_NORM}")
    uhat = duhamel_coeffs(fhat, f.grid, f.dt, alpha)
    mod_out = band_moduli(uhat, bank)
    out_idx = idx.shifted(alpha / idx.p)
    out_norm = time_lp(frame_norms_from_moduli(mod_out, out_idx, bank), idx.p, f.t_final)
    return _record(alpha, idx, bank, f.t_final, f.steps, probe, in_norm, out_norm)


# ---------------------------------------------------------------------------
# near / far dyadic sums


@functools.lru_cache(maxsize=None)
def measured_decay_rate(alpha: float, p: float, profile_kind: str) -> float:
    """Fitted exponent ``c`` in ``G(tau) <= C exp(-c tau)``."""
    return decay_bound_report(alpha, p, BumpProfile(profile_kind)).c


class SplitSums(NamedTuple):
    near: float
    far: float
    bound: float


def band_lp_norms(mod: BandModuli, s: float, p: float, bank: FilterBank) -> np.ndarray:
    """``||2^{js} D_j f(t_n)||_p`` as an array ``(M+1, J)``."""
    g = bank.grid
    norms = _lp(mod.bands, p, g.cell_volume, g.axes)  # (J, M+1)
    return (norms * (2.0 ** (s * np.arange(1, bank.j_max + 1)))[:, None]).T


def split_sums_from_norms(A: np.ndarray, alpha: float, p: float, dt: float, c: float) -> SplitSums:
    """Discrete near/far sums from band norms ``A[n, j-1]`` at the left nodes ``s_n``.

    Outer times are the right nodes ``t_m`` (``m = 1..M``), inner times the
    left nodes ``s_n`` with ``n < m``; the lag ``t_m - s_n = l dt`` is at
    least one step.
    """
    M = A.shape[0] - 1
    A = A[:M]
    j = np.arange(1, A.shape[1] + 1)
    lags = dt * np.arange(1, M + 1)
    x = lags[:, None] * 2.0 ** (j * alpha)[None, :]  # (lag, j)
    w = 2.0 ** (j * alpha / p)[None, :] * np.exp(-c * x)
    near_w = np.where(x <= 1.0, w, 0.0)
    far_w = np.where(x > 1.0, w, 0.0)
    # rows n, columns lag index l-1; keep l <= M - n
    valid = np.arange(M)[None, :] < (M - np.arange(M))[:, None]
    near = dt * dt * float(np.sum(np.where(valid, (A @ near_w.T) ** p, 0.0)))
    far = dt * dt * float(np.sum(np.where(valid, (A @ far_w.T) ** p, 0.0)))
    bound = dt * float(np.sum(A**p))
    return SplitSums(near, far, bound)


def dyadic_split_sums(f: SpaceTimeField, alpha: float, p: float, bank: FilterBank,
                      s: float = 0.0, c: float | None = None) -> SplitSums:
    """Near (``(t-s) 2^{j alpha} <= 1``) and far parts of the weighted dyadic sums.

    Weights are ``2^{j alpha/p} exp(-c (t-s) 2^{j alpha})`` with ``c`` measured
    from the band-kernel decay unless given.  ``bound`` is
    ``sum_j int int |2^{js} D_j f|^p``.
    """
    check_alpha(alpha)
    if c is None:
        c = measured_decay_rate(float(alpha), float(p), bank.profile.kind)
    mod = band_moduli(spectral_frames(f), bank)
    return split_sums_from_norms(band_lp_norms(mod, s, p, bank), alpha, p, f.dt, c)


def near_weight_sum(delta: float, alpha: float, p: float, j_max: int) -> float:
    """``(sum_{1<=j<=j_max, delta 2^{j alpha} <= 1} 2^{j alpha / (2(p-1))})^{p-1}``."""
    j = np.arange(1, j_max + 1)
    keep = delta * 2.0 ** (j * alpha) <= 1.0
    return float(np.sum(2.0 ** (j[keep] * alpha / (2.0 * (p - 1.0))))) ** (p - 1.0)


def far_weight_sum(delta: float, alpha: float, p: float, c: float) -> float:
    """``(sum_{j>=1, delta 2^{j alpha} > 1} 2^{2 j alpha/(p-1)} exp(-c~ delta 2^{j alpha}))^{p-1}``.

    ``c~ = c p / (p-1)``; the sum runs until the exponential underflows.
    """
    ct = c * p / (p - 1.0)
    total = 0.0
    j = 1
    while True:
        x = delta * 2.0 ** (j * alpha)
        if ct * x > 745.0:
            break
        if x > 1.0:
            total += 2.0 ** (2.0 * j * alpha / (p - 1.0)) * math.exp(-ct * x)
        j += 1
    return total ** (p - 1.0)


def split_constants(alpha: float, p: float, c: float, grid_points: int = 4001) -> tuple[float, float]:
    """Constants ``(K_near, K_far)`` with ``near <= K_near * bound`` and ``far <= K_far * bound``.

    Near: Hoelder plus the finite geometric sum give
    ``K_near = 2 (r / (r - 1))^{p-1}`` with ``r = 2^{alpha / (2(p-1))}``; the 2 is
    ``sum_l dt (l dt)^{-1/2}`` over lags below ``2^{-j alpha}``, at most
    ``2 * 2^{-j alpha/2}``.  Far: ``K_far = 2 S^{p-1}`` where ``S`` is the sup
    over ``X0 in (1, 2^alpha]`` of ``sum_k h(X0 2^{k alpha})``,
    ``h(X) = X^{2/(p-1)} exp(-c p/(p-1) X)``; the sup is taken on a grid and
    padded by the largest jump between neighbouring grid values.
    """
    if p <= 1:
        raise ValueError("split constants need p > 1")
    r = 2.0 ** (alpha / (2.0 * (p - 1.0)))
    k_near = 2.0 * (r / (r - 1.0)) ** (p - 1.0)
    ct = c * p / (p - 1.0)
    x0 = np.linspace(1.0, 2.0**alpha, grid_points)
    total = np.zeros_like(x0)
    k = 0
    while True:
        x = x0 * 2.0 ** (k * alpha)
        if ct * x[0] > 745.0:
            break
        total += x ** (2.0 / (p - 1.0)) * np.exp(-ct * x)
        k += 1
    s = float(np.max(total) + np.max(np.abs(np.diff(total))))
    return k_near, 2.0 * s ** (p - 1.0)


def weight_sum_slope(kind: str, alpha: float, p: float, j_max: int, c: float = 1.0,
                     samples: int = 401, delta_range=None):
    """Least-squares log-log slope of a weight sum over ``[2^{-j_max alpha}, 2^{-2 alpha}]``.

    Returns ``(slope, deltas, values)``.
    """
    if p <= 1:
        raise ValueError("weight sums need p > 1")
    lo, hi = delta_range or (2.0 ** (-j_max * alpha), 2.0 ** (-2 * alpha))
    deltas = np.geomspace(lo, hi, samples)
    if kind == "near":
        vals = np.array([near_weight_sum(d, alpha, p, j_max) for d in deltas])
    elif kind == "far":
        vals = np.array([far_weight_sum(d, alpha, p, c) for d in deltas])
    else:
        raise ValueError(f"kind must be 'near' or 'far', got {kind!r}")
    slope = float(np.polyfit(np.log(deltas), np.log(vals), 1)[0])
    return slope, deltas, vals
