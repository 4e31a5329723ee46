"""Verification suites behind the ``verify-*`` subcommands.

Each suite returns a list of :class:`Check` rows; a suite passes when every
row does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import special

from .frac_heat import (
    KernelQuadratureError,
    decay_bound_report,
    kernel_eval,
    scale_collapse_error,
)
from .littlewood_paley import PROFILE_KINDS, BumpProfile, build_filter_bank, partition_residual
from .rademacher import khinchine_exact, khinchine_survey, write_reports_csv
from .spectral_core import RealField, TorusGrid, forward_transform, inverse_transform

DEFAULT_CORE_GRIDS = {1: (16, 32, 64, 128, 256, 1024), 2: (16, 32, 64, 128, 256)}


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    note: str = ""

    @classmethod
    def at_most(cls, name, value, tol, note=""):
        return cls(name, float(value), float(tol), bool(value <= tol), note)


def format_table(checks) -> str:
    width = max((len(c.name) for c in checks), default=10)
    lines = [f"{'check':<{width}}  {'value':>12}  {'tolerance':>10}  result"]
    for c in checks:
        extra = f"  {c.note}" if c.note else ""
        lines.append(f"{c.name:<{width}}  {c.value:>12.4e}  {c.tolerance:>10.1e}  "
                     f"{'PASS' if c.passed else 'FAIL'}{extra}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# spectral core and Littlewood-Paley


def _band_limited(rng, grid, radius):
    values = rng.standard_normal(grid.shape)
    c = forward_transform(RealField(grid, values)).coeffs.copy()
    c[grid.frequency_norm > radius] = 0.0
    return c


def core_checks(grid: TorusGrid, profile: BumpProfile, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    tag = f"d={grid.dim} N={grid.points_per_axis} {profile.kind}"
    bank = build_filter_bank(grid, profile)
    out = []

    f = RealField(grid, rng.standard_normal(grid.shape))
    back = inverse_transform(forward_transform(f)).values
    out.append(Check.at_most(f"round-trip {tag}",
                             np.max(np.abs(back - f.values)) / np.max(np.abs(f.values)), 1e-12))

    fhat = forward_transform(f).coeffs
    lhs = grid.cell_volume * np.sum(f.values**2) / grid.side_length**grid.dim
    rhs = np.sum(np.abs(fhat) ** 2) / grid.side_length ** (2 * grid.dim)
    out.append(Check.at_most(f"parseval {tag}", abs(lhs - rhs) / lhs, 1e-10))

    out.append(Check.at_most(f"partition {tag}", partition_residual(bank), 1e-14,
                             note=f"j_max={bank.j_max}"))

    worst = 0.0
    for i in range(1, bank.j_max + 1):
        for j in range(i + 2, bank.j_max + 1):
            worst = max(worst, float(np.max(np.abs(bank.band(i) * bank.band(j) * fhat))))
    out.append(Check.at_most(f"band disjointness {tag}", worst / np.max(np.abs(fhat)), 1e-14))

    c = _band_limited(rng, grid, bank.resolved_radius)
    total = bank.s0_filter * c + np.sum(bank.band_filters * c, axis=0)
    out.append(Check.at_most(f"reconstruction {tag}",
                             np.max(np.abs(total - c)) / np.max(np.abs(c)), 1e-12))
    return out


def verify_core(grids=None, profiles=PROFILE_KINDS) -> list[Check]:
    grids = grids or [TorusGrid(d, n) for d, ns in DEFAULT_CORE_GRIDS.items() for n in ns]
    return [c for g in grids for kind in profiles for c in core_checks(g, BumpProfile(kind))]


# ---------------------------------------------------------------------------
# kernels


def _sample_points(n=10, seed=7):
    rng = np.random.default_rng(seed)
    return list(zip(rng.uniform(0.2, 2.0, n), rng.uniform(0.0, 0.5, n)))


def kernel_oracle_checks(alphas, points=None) -> list[Check]:
    points = points or _sample_points()
    out = []
    for alpha in alphas:
        if alpha == 2:
            worst = max(abs(kernel_eval(2, t, x) - math.sqrt(math.pi / t) * math.exp(-math.pi**2 * x * x / t))
                        / (math.sqrt(math.pi / t) * math.exp(-math.pi**2 * x * x / t)) for t, x in points)
            out.append(Check.at_most("gaussian closed form (alpha=2)", worst, 1e-8))
        if alpha == 1:
            worst = max(abs(kernel_eval(1, t, x) - 2 * t / (t * t + 4 * math.pi**2 * x * x))
                        / (2 * t / (t * t + 4 * math.pi**2 * x * x)) for t, x in points)
            out.append(Check.at_most("poisson closed form (alpha=1)", worst, 1e-8))
        worst = 0.0
        for t, _ in points:
            exact = 2.0 / alpha * t ** (-1.0 / alpha) * special.gamma(1.0 / alpha)
            worst = max(worst, abs(kernel_eval(alpha, t, 0.0) - exact) / exact)
        out.append(Check.at_most(f"x=0 gamma formula (alpha={alpha:g})", worst, 1e-8))
    return out


def decay_checks(alpha: float, p: float, profile: BumpProfile, out_dir=None) -> list[Check]:
    tag = f"alpha={alpha:g} p={p:g} {profile.kind}"
    collapse = scale_collapse_error(alpha, p, (0.0, 0.5, 2.0, 8.0, 20.0), profile)
    rep = decay_bound_report(alpha, p, profile)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"decay_alpha{alpha:g}_p{p:g}_{profile.kind}"
        rep.write(out / f"{stem}.csv", out / f"{stem}.json")
    target = alpha / p
    return [
        Check.at_most(f"scale collapse {tag}", collapse, 1e-6),
        Check(f"decay rate c > 0 {tag}", rep.c, 0.0, rep.c > 0, note=f"C={rep.C:.4g} C'={rep.C_pointwise:.4g}"),
        Check.at_most(f"prefactor slope {tag}", abs(rep.prefactor_slope - target) / target, 0.02,
                      note=f"slope={rep.prefactor_slope:.6f}"),
    ]


def verify_kernel(alphas=(0.5, 1.0, 1.5, 2.0), p: float = 2.0, profiles=("smooth_exponential",),
                  out_dir=None) -> list[Check]:
    try:
        checks = kernel_oracle_checks(alphas)
    except KernelQuadratureError as exc:
        return [Check("kernel quadrature", exc.error_estimate, 0.0, False, note=str(exc))]
    for kind in profiles:
        for a in alphas:
            checks += decay_checks(a, p, BumpProfile(kind), out_dir)
    return checks


# ---------------------------------------------------------------------------
# Khinchine


def verify_khinchine(out_dir=None, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    reports = []
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 17))
        rep = khinchine_exact(rng.standard_normal(n) + 1j * rng.standard_normal(n), 2)
        reports.append(rep)
        worst = max(worst, abs(rep.ratio_low - 1.0))
    checks = [Check.at_most("p=2 ratio exactly 1", worst, 1e-14)]

    bad = 0
    for n in range(1, 11):
        rep = khinchine_exact(np.ones(n), 4)
        reports.append(rep)
        bad += rep.integral != 3 * n * n - 2 * n
    checks.append(Check("p=4 all-ones equals 3n^2-2n (n<=10)", bad, 0, bad == 0))

    for p in (4, 6):
        sv = khinchine_survey(p, 200, (2, 16), seed=seed + p, reports=reports)
        checks.append(Check(f"p={p} ratios inside [3^(-p/2), (p-1)^(p/2)]", sv.ratio_high,
                            sv.upper_bound, sv.inside,
                            note=f"observed [{sv.ratio_low:.4f}, {sv.ratio_high:.4f}]"))

    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 12))
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lam = complex(rng.uniform(0.1, 10), rng.uniform(-5, 5))
        for p in (1.5, 3, 4):
            a = khinchine_exact(c, p).ratio_low
            b = khinchine_exact(lam * c, p).ratio_low
            worst = max(worst, abs(a - b) / a)
    checks.append(Check.at_most("scale invariance", worst, 1e-12))
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_reports_csv(out / "khinchine_reports.csv", reports)
    return checks
