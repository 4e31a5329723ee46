"""Acceptance suite: one check per criterion, each at its stated tolerance and time budget.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
one PASS/FAIL line per criterion.  ``python tests/test_acceptance.py`` prints
the same lines without pytest.
"""

from __future__ import annotations

import functools
import math
import time
from dataclasses import dataclass

import numpy as np
import pytest
from scipy import special

from fractl import (
    BumpProfile,
    ProbeSpec,
    SpaceTimeField,
    TLIndex,
    TorusGrid,
    band_overlap_check,
    build_filter_bank,
    decay_bound_report,
    duhamel_apply,
    generate_probe,
    kernel_eval,
    khinchine_exact,
    measure_ratio,
    partition_residual,
)
from fractl.frac_heat import scale_collapse_error
from fractl.littlewood_paley import PROFILE_KINDS
from fractl.probes import measured_decay_rate, weight_sum_slope
from fractl.rademacher import khinchine_survey
from fractl.spectral_core import spectral_frames
from fractl.sweep import GROWTH_LIMIT, SweepConfig, records_csv, splits_csv, sweep

ALPHAS = (0.5, 1.0, 1.5, 2.0)


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    @property
    def line(self) -> str:
        within = self.seconds <= self.budget
        verdict = "PASS" if self.passed and within else "FAIL"
        note = "" if within else f"; over time budget {self.budget:g} s"
        return f"criterion {self.number}: {verdict}  {self.title}  ({self.detail}; {self.seconds:.1f} s{note})"


def timed(number, title, budget):
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            passed, detail = fn()
            return Outcome(number, title, bool(passed), detail, time.perf_counter() - t0, budget)
        return run
    return wrap


# ---------------------------------------------------------------------------
# shared default sweep (criteria 7, 8, 9)


@functools.lru_cache(maxsize=None)
def default_sweep(threads: int = 1):
    return sweep(SweepConfig(), threads=threads)


# ---------------------------------------------------------------------------
# criteria


@timed(1, "partition of unity", 10)
def criterion_1():
    worst = 0.0
    for dim in (1, 2):
        for n in (16, 32, 64, 128, 256):
            for kind in PROFILE_KINDS:
                worst = max(worst, partition_residual(build_filter_bank(TorusGrid(dim, n), BumpProfile(kind))))
    return worst <= 1e-14, f"max residual {worst:.2e} <= 1e-14 over 20 grid/profile pairs"


@timed(2, "band-overlap identity", 30)
def criterion_2():
    g = TorusGrid(1, 256)
    bank = build_filter_bank(g)
    worst = 0.0
    cases = 0
    for alpha in ALPHAS:
        for j in range(2, bank.j_max):
            for seed in range(20):
                rng = np.random.default_rng((seed, j, int(4 * alpha)))
                f = SpaceTimeField(g, 1.0, rng.standard_normal((33, 256)))
                worst = max(worst, band_overlap_check(f, j, alpha, bank=bank))
                cases += 1
    return worst <= 1e-11, f"max relative residual {worst:.2e} <= 1e-11 over {cases} probes"


@timed(3, "kernel closed forms", 60)
def criterion_3():
    rng = np.random.default_rng(3)
    pts = list(zip(rng.uniform(0.05, 2.0, 10), rng.uniform(0.0, 0.6, 10)))
    gauss = max(abs(kernel_eval(2.0, t, x) / (math.sqrt(math.pi / t) * math.exp(-math.pi**2 * x * x / t)) - 1)
                for t, x in pts)
    poisson = max(abs(kernel_eval(1.0, t, x) / (2 * t / (t * t + 4 * math.pi**2 * x * x)) - 1) for t, x in pts)
    origin = 0.0
    for alpha in ALPHAS:
        for t, _ in pts:
            exact = 2 / alpha * t ** (-1 / alpha) * special.gamma(1 / alpha)
            origin = max(origin, abs(kernel_eval(alpha, t, 0.0) / exact - 1))
    worst = max(gauss, poisson, origin)
    return worst <= 1e-8, (f"rel. errors gaussian {gauss:.1e}, poisson {poisson:.1e}, "
                           f"x=0 {origin:.1e} <= 1e-8")


@timed(4, "band-kernel decay", 300)
def criterion_4():
    collapse, rates, slope_err = 0.0, [], 0.0
    for kind in PROFILE_KINDS:
        prof = BumpProfile(kind)
        for alpha in ALPHAS:
            for p in (2.0, 4.0):
                collapse = max(collapse, scale_collapse_error(alpha, p, (0.0, 0.5, 2.0, 8.0, 20.0), prof))
                rep = decay_bound_report(alpha, p, prof)
                rates.append(rep.c)
                slope_err = max(slope_err, abs(rep.prefactor_slope / (alpha / p) - 1))
    ok = collapse <= 1e-6 and min(rates) > 0 and slope_err <= 0.02
    return ok, (f"scale collapse {collapse:.1e} <= 1e-6, min c {min(rates):.3f} > 0, "
                f"prefactor slope rel. error {slope_err:.1e} <= 2%")


@timed(5, "Khinchine", 60)
def criterion_5():
    rng = np.random.default_rng(5)
    p2 = max(abs(khinchine_exact(rng.standard_normal(n) + 1j * rng.standard_normal(n), 2).ratio_low - 1)
             for n in rng.integers(1, 17, 50))
    ones = all(khinchine_exact(np.ones(n), 4).integral == 3 * n * n - 2 * n for n in range(1, 11))
    surveys = [khinchine_survey(p, 200, (2, 16), seed=p) for p in (4, 6)]
    inside = all(s.inside for s in surveys)
    ranges = ", ".join(f"p={s.p:g} [{s.ratio_low:.3f}, {s.ratio_high:.3f}]" for s in surveys)
    return p2 <= 1e-14 and ones and inside, (f"p=2 deviation {p2:.1e}, 3n^2-2n exact: {ones}, "
                                             f"ratios {ranges} inside bounds: {inside}")


def _single_mode_ratio_oracle(j, alpha, p, steps):
    mu = 2.0 ** (j * alpha)
    t = np.arange(1, steps + 1) / steps
    u = -np.expm1(-t * mu) / mu
    return (np.sum((2 ** (j * alpha / p) * u) ** p) / steps) ** (1 / p)


@timed(6, "Duhamel exactness", 30)
def criterion_6():
    g = TorusGrid(1, 128)
    bank = build_filter_bank(g)
    steps = 256
    frame_err, ratio_err = 0.0, 0.0
    t = np.linspace(0, 1, steps + 1)
    for alpha in ALPHAS:
        for k in (1, 2, 3, 8, 13, 32):
            f = generate_probe(ProbeSpec("single_mode", mode=(k,)), g, bank, steps, 1.0)
            coeff = spectral_frames(duhamel_apply(f, alpha))[:, k]
            mu = float(k) ** alpha
            expected = (1 - np.exp(-t * mu)) / mu
            # frame 0 is zero on both sides
            frame_err = max(frame_err, float(np.max(np.abs(coeff[1:] - expected[1:]) / expected[1:])))
        for j in range(1, bank.j_max + 1):
            for p in (2.0, 4.0):
                f = generate_probe(ProbeSpec("single_mode", band=j), g, bank, steps, 1.0)
                rec = measure_ratio(f, alpha, TLIndex(0.0, p, 2.0), bank)
                ratio_err = max(ratio_err, abs(rec.ratio / _single_mode_ratio_oracle(j, alpha, p, steps) - 1))
    ok = frame_err <= 1e-12 and ratio_err <= 1e-6
    return ok, f"per-frame rel. error {frame_err:.1e} <= 1e-12, ratio vs oracle {ratio_err:.1e} <= 1e-6"


@timed(7, "main estimate audit", 1800)
def criterion_7():
    s = default_sweep().summary()
    growth = s["max_growth_in_hypothesis"]
    n_cells = sum(c["in_hypothesis"] for c in s["cells"].values())
    worst = max(max(c["max_ratio_by_N"].values()) for c in s["cells"].values() if c["in_hypothesis"])
    ok = s["hypothesis_cells_finite"] and growth < GROWTH_LIMIT and s["records"] >= 1500
    return ok, (f"{s['records']} records, {n_cells} hypothesis cells finite: {s['hypothesis_cells_finite']}, "
                f"max ratio {worst:.4f}, max growth N=128->256 {growth:.2e} < {GROWTH_LIMIT}")


def slope_table(j_max):
    rows = []
    for alpha in ALPHAS:
        for p in (2.0, 4.0):
            c = measured_decay_rate(alpha, p, "smooth_exponential")
            near = weight_sum_slope("near", alpha, p, j_max, c)[0]
            far = weight_sum_slope("far", alpha, p, j_max, c)[0]
            rows.append((alpha, p, near, far))
    return rows


@timed(8, "near/far split diagnostics", 600)
def criterion_8():
    cfg = SweepConfig()
    j_max = build_filter_bank(TorusGrid(cfg.dim, max(cfg.grids))).j_max
    rows = slope_table(j_max)
    near_ok = [r for r in rows if abs(r[2] + 0.5) <= 0.05]
    far_ok = [r for r in rows if abs(r[3] + 2.0) <= 0.1]
    s = default_sweep().summary()
    bounded = s["split_within_bounds"]
    ok = len(near_ok) == len(rows) and len(far_ok) == len(rows) and bounded
    table = " ".join(f"({a:g},{p:g}):{n:+.3f}/{f:+.3f}" for a, p, n, f in rows)
    return ok, (f"j_max={j_max}; near slope within -0.5+-0.05 for {len(near_ok)}/{len(rows)}, "
                f"far slope within -2+-0.1 for {len(far_ok)}/{len(rows)} (alpha,p):near/far {table}; "
                f"I, II within recorded constants on all {len(default_sweep().splits)} probes: {bounded}")


@timed(9, "determinism across thread counts", 1800)
def criterion_9():
    a, b = default_sweep(1), default_sweep(2)

    def numeric(records):
        return [line.rsplit(",", 1)[0] for line in records_csv(records).splitlines()]

    same_records = numeric(a.records) == numeric(b.records)
    same_splits = splits_csv(a.splits) == splits_csv(b.splits)
    return same_records and same_splits, (f"records CSV identical without timestamp: {same_records}, "
                                          f"split sums identical: {same_splits}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.slow
@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(criterion, acceptance_log):
    outcome = criterion()
    acceptance_log.append(outcome.line)
    print(outcome.line)
    assert outcome.passed, outcome.line
    assert outcome.seconds <= outcome.budget, outcome.line


if __name__ == "__main__":
    for crit in CRITERIA:
        print(crit().line, flush=True)
