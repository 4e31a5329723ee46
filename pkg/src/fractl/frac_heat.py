"""Fractional heat semigroup, its Duhamel integral and kernel diagnostics.

The semigroup acts on Fourier coefficients by ``exp(-t |xi|^alpha)``.  The
Duhamel map ``u(t) = int_0^t exp(-(t-s)|xi|^alpha) f(s) ds`` is integrated
exactly per mode, treating ``f`` as piecewise constant on each time step::

    u_{n+1} = exp(-dt mu) u_n + phi1(mu, dt) f_n,   phi1 = (1 - exp(-dt mu)) / mu

Kernel routines work in one space dimension.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate

from .littlewood_paley import BumpProfile
from .spectral_core import SpaceTimeField, SpectralField, TorusGrid, frames_from_spectral, spectral_frames

# below this value of dt*mu, phi1 uses its two-term series
SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class HeatParams:
    alpha: float
    t: float

    def __post_init__(self):
        check_alpha(self.alpha)
        if not (math.isfinite(self.t) and self.t >= 0):
            raise ValueError(f"t must be finite and >= 0, got {self.t}")


def check_alpha(alpha: float) -> None:
    if not (0 < alpha <= 2):
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")


def symbol(grid: TorusGrid, alpha: float) -> np.ndarray:
    """``|xi|^alpha`` on the lattice."""
    return grid.frequency_norm**alpha


def semigroup_apply(field: SpectralField, params: HeatParams) -> SpectralField:
    mult = np.exp(-params.t * symbol(field.grid, params.alpha))
    return SpectralField(field.grid, mult * field.coeffs)


def phi1(mu: np.ndarray, dt: float) -> np.ndarray:
    """``(1 - exp(-dt mu)) / mu`` with the ``mu -> 0`` limit ``dt``."""
    mu = np.asarray(mu, dtype=float)
    x = dt * mu
    small = x < SERIES_CUTOFF
    out = np.empty_like(x)
    out[small] = dt * (1.0 - 0.5 * x[small])
    out[~small] = -np.expm1(-x[~small]) / mu[~small]
    return out


def duhamel_coeffs(fhat: np.ndarray, grid: TorusGrid, dt: float, alpha: float) -> np.ndarray:
    """Run the exponential recurrence on frame spectra of shape ``(M+1, *grid.shape)``."""
    check_alpha(alpha)
    mu = symbol(grid, alpha)
    decay = np.exp(-dt * mu)
    gain = phi1(mu, dt)
    u = np.zeros_like(fhat, dtype=complex)
    for n in range(fhat.shape[0] - 1):
        u[n + 1] = decay * u[n] + gain * fhat[n]
    return u


def duhamel_apply(f: SpaceTimeField, alpha: float) -> SpaceTimeField:
    """Approximate ``T^alpha f`` at every frame time; frame 0 is zero."""
    u = duhamel_coeffs(spectral_frames(f), f.grid, f.dt, alpha)
    return frames_from_spectral(f.grid, f.t_final, u, real=not np.iscomplexobj(f.frames))


# ---------------------------------------------------------------------------
# physical-space kernels (d = 1)


class KernelQuadratureError(RuntimeError):
    """Quadrature could not reach the requested accuracy."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (achieved error estimate {error_estimate:.3e})")
        self.error_estimate = error_estimate


@dataclass(frozen=True)
class KernelQuadrature:
    """Controls for :func:`kernel_eval`.

    The frequency integral is cut at ``R`` with ``t R^alpha = tail_exponent``.
    A result is rejected when the reported error exceeds ``budget`` relative.
    """

    epsrel: float = 1e-12
    limit: int = 2000
    tail_exponent: float = 50.0
    budget: float = 1e-9


def kernel_eval(alpha: float, t: float, x: float, quad: KernelQuadrature | None = None) -> float:
    """``P^alpha(t, x) = 2 int_0^inf cos(2 pi x xi) exp(-t xi^alpha) dxi`` in one dimension."""
    check_alpha(alpha)
    if not t > 0:
        raise ValueError(f"kernel_eval needs t > 0, got {t}")
    quad = quad or KernelQuadrature()
    cutoff = (quad.tail_exponent / t) ** (1.0 / alpha)

    def envelope(xi):
        return np.exp(-t * xi**alpha)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if x == 0:
            value, err = integrate.quad(envelope, 0.0, cutoff, epsabs=0.0,
                                        epsrel=quad.epsrel, limit=quad.limit)
        else:
            value, err = integrate.quad(envelope, 0.0, cutoff, weight="cos",
                                        wvar=2.0 * np.pi * abs(x), epsabs=0.0,
                                        epsrel=quad.epsrel, limit=quad.limit)
    value, err = 2.0 * value, 2.0 * err
    if not np.isfinite(value) or err > quad.budget * abs(value):
        raise KernelQuadratureError(f"P^{alpha}({t}, {x}) did not converge", err)
    return float(value)


@dataclass(frozen=True)
class BandQuadrature:
    """Controls for band-kernel L1 integrals.

    The kernel is sampled by a zero-padded FFT on ``|2^j x| <= radius`` with
    ``samples_per_unit`` points per unit of ``2^j x``; ``radius`` comes from the
    ``(1 + 4 pi^2 |2^j x|^2)^-2`` envelope so the neglected tail is below
    ``tail_tol`` of the head.
    """

    samples_per_unit: int = 256
    tail_tol: float = 1e-9
    oversample: int = 2
    budget: float = 1e-4

    @property
    def radius(self) -> float:
        a = 2.0 * np.pi
        y = (4.0 / (3.0 * np.pi * a**3 * self.tail_tol)) ** (1.0 / 3.0)
        return 2.0 ** math.ceil(math.log2(y))


@dataclass
class KernelSample:
    """``|P_j^alpha(t, x)|`` on ``x >= 0`` plus its L1 norm over the line."""

    alpha: float
    t: float
    j: int
    p_weight: float
    radii: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    l1_value: float = 0.0
    error_estimate: float = 0.0


def _abs_trapezoid(v: np.ndarray, dx: float) -> float:
    """Integral of ``|v|`` for piecewise-linear ``v``, splitting segments at sign changes."""
    a, b = v[:-1], v[1:]
    same = a * b >= 0
    total = np.sum(np.abs(a[same] + b[same]))
    a, b = a[~same], b[~same]
    total += np.sum((a * a + b * b) / (np.abs(a) + np.abs(b)))
    return 0.5 * dx * float(total)


def band_kernel_sample(alpha: float, t: float, j: int, p: float,
                       profile: BumpProfile | None = None,
                       quad: BandQuadrature | None = None) -> KernelSample:
    """Sample ``P_j^alpha(t, .) = 2^{j alpha/p} int exp(2 pi i x xi) psi(2^-j xi) exp(-t|xi|^alpha) dxi``."""
    check_alpha(alpha)
    if j < 1:
        raise ValueError(f"band index must be >= 1, got {j}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    profile = profile or BumpProfile()
    quad = quad or BandQuadrature()
    dx = 2.0**-j / quad.samples_per_unit
    half = int(quad.radius * quad.samples_per_unit)
    n = 2 * quad.oversample * half
    xi = np.abs(np.fft.fftfreq(n, d=dx))
    g = 2.0 ** (j * alpha / p) * profile.psi(xi * 2.0**-j) * np.exp(-t * xi**alpha)
    kernel = np.fft.ifft(g).real / dx
    # kernel[m] sits at x = m dx; it is even in x
    right = kernel[: half + 1]
    left = kernel[-half:]
    line = np.concatenate([left, right])
    fine = _abs_trapezoid(line, dx)
    coarse = _abs_trapezoid(line[::2], 2 * dx)
    err = abs(coarse - fine) / 3.0
    if fine > 0 and err > quad.budget * fine:
        raise KernelQuadratureError(f"band kernel L1 (alpha={alpha}, t={t}, j={j}) under-resolved", err)
    radii = np.arange(half + 1) * dx
    return KernelSample(alpha, t, j, p, radii, np.abs(right), fine, err)


def band_kernel_l1(alpha: float, t: float, j: int, p: float,
                   profile: BumpProfile | None = None,
                   quad: BandQuadrature | None = None) -> float:
    return band_kernel_sample(alpha, t, j, p, profile, quad).l1_value


def profile_l1(alpha: float, tau: float, profile: BumpProfile | None = None,
               j: int = 3, quad: BandQuadrature | None = None) -> float:
    """``G(tau)``: the band-kernel L1 norm with the ``2^{j alpha/p}`` prefactor removed."""
    return band_kernel_l1(alpha, tau * 2.0 ** (-j * alpha), j, 1.0, profile, quad) / 2.0 ** (j * alpha)


def scale_collapse_error(alpha: float, p: float, taus, profile: BumpProfile | None = None,
                         pair: tuple[int, int] = (3, 5), quad: BandQuadrature | None = None) -> float:
    """Max relative gap between two bands' L1 norms after removing the dilation prefactor."""
    worst = 0.0
    for tau in taus:
        vals = [band_kernel_l1(alpha, tau * 2.0 ** (-j * alpha), j, p, profile, quad)
                / 2.0 ** (j * alpha / p) for j in pair]
        worst = max(worst, abs(vals[0] - vals[1]) / abs(vals[0]))
    return worst


@dataclass
class DecayReport:
    alpha: float
    p: float
    profile: str
    c: float
    C: float
    C_pointwise: float
    prefactor_slope: float
    taus: np.ndarray = field(repr=False)
    G: np.ndarray = field(repr=False)
    residuals: np.ndarray = field(repr=False)

    def summary(self) -> dict:
        return {k: v for k, v in asdict(self).items() if not isinstance(v, np.ndarray)}

    def write(self, csv_path, json_path) -> None:
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["tau", "G", "fit_residual"])
            for row in zip(self.taus, self.G, self.residuals):
                w.writerow([repr(float(v)) for v in row])
        with open(json_path, "w") as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True)
            fh.write("\n")


DEFAULT_TAUS = np.concatenate([[0.0, 0.25, 0.5], np.arange(1.0, 31.0)])


def decay_bound_report(alpha: float, p: float, profile: BumpProfile | None = None,
                       taus=None, j: int = 3, prefactor_levels=(2, 3, 4, 5),
                       quad: BandQuadrature | None = None) -> DecayReport:
    """Fit ``G(tau) <= C exp(-c tau)`` and check the pointwise envelope.

    ``c`` is minus the least-squares slope of ``log G`` on ``1 <= tau <= 30``;
    ``C`` is the smallest constant making the bound hold on every tabulated
    ``tau``.  ``C_pointwise`` bounds
    ``|P_j| (1 + 4 pi^2 |2^j x|^2)^2 / (2^{j alpha/p} 2^j exp(-c t 2^{j alpha}))``
    over ``|2^j x| <= 32``.
    """
    profile = profile or BumpProfile()
    taus = DEFAULT_TAUS if taus is None else np.asarray(taus, dtype=float)
    G = np.empty_like(taus)
    c_ptw = 0.0
    samples = []
    for i, tau in enumerate(taus):
        s = band_kernel_sample(alpha, tau * 2.0 ** (-j * alpha), j, p, profile, quad)
        G[i] = s.l1_value / 2.0 ** (j * alpha / p)
        samples.append(s)
    fit = (taus >= 1) & (taus <= 30)
    slope, intercept = np.polyfit(taus[fit], np.log(G[fit]), 1)
    c = -slope
    residuals = np.log(G) - (intercept + slope * taus)
    C = float(np.max(G * np.exp(c * taus)))
    for tau, s in zip(taus, samples):
        y = s.radii * 2.0**j
        near = y <= 32
        env = (1.0 + 4.0 * np.pi**2 * y[near] ** 2) ** 2
        scale = 2.0 ** (j * alpha / p) * 2.0**j * np.exp(-c * tau)
        c_ptw = max(c_ptw, float(np.max(s.values[near] * env)) / scale)
    tau_ref = 1.0
    l1s = [band_kernel_l1(alpha, tau_ref * 2.0 ** (-jj * alpha), jj, p, profile, quad)
           for jj in prefactor_levels]
    pref_slope = float(np.polyfit(np.asarray(prefactor_levels, float), np.log2(l1s), 1)[0])
    return DecayReport(float(alpha), float(p), profile.kind, float(c), C, float(c_ptw), pref_slope,
                       taus, G, residuals)
