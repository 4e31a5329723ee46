"""Rademacher functions and an exact finite Khinchine check.

``r_1 = 1`` on ``[0, 1/2]`` and ``-1`` on ``(1/2, 1)``, extended with period 1,
and ``r_j(z) = r_1(2^{j-1} z)``.  On each dyadic cell of length ``2^-n`` the
first ``n`` functions are constant and every sign pattern occurs on exactly one
cell, so ``int_0^1 |sum_j c_j r_j|^p dz`` is the mean over all ``2^n`` sign
vectors.
"""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields

import numpy as np

MAX_TERMS = 22


def rademacher_value(j, z):
    """Value of ``r_j`` at ``z`` in ``[0, 1)``; vectorised over ``z``."""
    if int(j) != j or j < 1:
        raise ValueError(f"j must be a positive integer, got {j}")
    z = np.asarray(z, dtype=float)
    if np.any((z < 0) | (z >= 1)):
        raise ValueError("z must lie in [0, 1)")
    frac = np.mod(z * 2.0 ** (j - 1), 1.0)
    out = np.where(frac <= 0.5, 1, -1)
    return int(out) if out.ndim == 0 else out


def sign_sums(c) -> np.ndarray:
    """``sum_j eps_j c_j`` for every sign vector ``eps``, in dyadic-cell order.

    Entry ``m`` corresponds to the cell ``[m 2^-n, (m+1) 2^-n)``; the sign of
    ``c_j`` there is ``+`` when bit ``n-j`` of ``m`` is 0.
    """
    c = np.asarray(c)
    sums = np.zeros(1, dtype=c.dtype if c.size else float)
    for cj in c:
        # term j contributes the next (less significant) bit of the cell index
        nxt = np.empty(2 * sums.size, dtype=np.result_type(sums, cj))
        nxt[0::2] = sums + cj
        nxt[1::2] = sums - cj
        sums = nxt
    return sums


@dataclass(frozen=True)
class KhinchineReport:
    n: int
    p: float
    lhs: float
    integral: float
    ratio_low: float
    ratio_high: float


def khinchine_exact(c, p: float) -> KhinchineReport:
    """Exact ``int_0^1 |sum_j c_j r_j(z)|^p dz`` by enumerating sign vectors."""
    c = np.asarray(c)
    if c.ndim != 1:
        raise ValueError("c must be a one-dimensional sequence")
    n = c.size
    if n > MAX_TERMS:
        raise ValueError(f"at most {MAX_TERMS} terms can be enumerated, got {n}")
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    sums = sign_sums(c)
    if np.iscomplexobj(sums):
        sq = sums.real**2 + sums.imag**2
    else:
        sq = sums * sums
    integral = float(np.mean(sq ** (p / 2.0)))
    energy = float(np.sum(np.abs(c) ** 2))
    lhs = energy ** (p / 2.0)
    ratio = integral / lhs if lhs > 0 else float("nan")
    return KhinchineReport(n, float(p), lhs, integral, ratio, ratio)


def gaussian_upper_constant(p: float) -> float:
    """``(p-1)^{p/2}``, an upper Khinchine constant for ``p >= 2``."""
    return (p - 1.0) ** (p / 2.0)


def crude_lower_constant(p: float) -> float:
    return 3.0 ** (-p / 2.0)


@dataclass(frozen=True)
class KhinchineSurvey:
    p: float
    count: int
    ratio_low: float
    ratio_high: float
    lower_bound: float
    upper_bound: float

    @property
    def inside(self) -> bool:
        return self.lower_bound <= self.ratio_low and self.ratio_high <= self.upper_bound


def khinchine_survey(p: float, count: int = 200, n_range=(2, 16), seed: int = 0,
                     reports: list | None = None) -> KhinchineSurvey:
    """Ratios for ``count`` random complex sequences with length in ``n_range``."""
    rng = np.random.default_rng(seed)
    lo, hi = np.inf, -np.inf
    for _ in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        rep = khinchine_exact(c, p)
        lo, hi = min(lo, rep.ratio_low), max(hi, rep.ratio_high)
        if reports is not None:
            reports.append(rep)
    return KhinchineSurvey(float(p), count, float(lo), float(hi),
                           crude_lower_constant(p), gaussian_upper_constant(p))


def write_reports_csv(path, reports) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f.name for f in fields(KhinchineReport)])
        for r in reports:
            w.writerow([repr(v) if isinstance(v, float) else v for v in astuple(r)])
