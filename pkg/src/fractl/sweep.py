"""Parameter sweeps over probes, grids and indices.

Configuration files are INI-style with a single ``[sweep]`` section::

    [sweep]
    schema = fractl.sweep/1
    dim = 1
    grids = 64, 128, 256
    side_length = 1.0
    alphas = 0.5, 1, 1.5, 2
    ps = 2, 4
    qs = 2, p            # numbers, "p" (q = p) or "inf"
    ss = 0, 1
    probe_kinds = single_mode, single_band, lacunary, white_noise, time_modulated
    seeds = 8            # probes per kind
    seed_base = 0
    bands = 1, 2, 3, 4   # cycled through by seed index
    t_final = 1.0        # one or more values
    steps = 256
    omega = 1.0
    profile = smooth_exponential
    split_sums = true

Every key is optional except ``schema``; unknown keys are errors.
"""

from __future__ import annotations

import configparser
import csv
import dataclasses
import hashlib
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .function_spaces import TLIndex
from .littlewood_paley import PROFILE_KINDS, BumpProfile, build_filter_bank
from .frac_heat import duhamel_coeffs
from .probes import (
    CSV_COLUMNS,
    PROBE_KINDS,
    TIME_PROFILES,
    DegenerateProbeError,
    ProbeSpec,
    RatioRecord,
    _record,
    band_lp_norms,
    band_moduli,
    frame_norms_from_moduli,
    generate_probe,
    measured_decay_rate,
    split_constants,
    split_sums_from_norms,
    weight_sum_slope,
)
from .spectral_core import TorusGrid, spectral_frames, time_lp

SCHEMA = "fractl.sweep/1"
GROWTH_LIMIT = 0.10


class ConfigError(ValueError):
    pass


def _floats(text):
    return [float(v) for v in _split(text)]


def _ints(text):
    return [int(v) for v in _split(text)]


def _split(text):
    return [v.strip() for v in text.replace("\n", ",").split(",") if v.strip()]


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _q_token(v):
    v = v.strip().lower()
    if v in ("p", "inf"):
        return v
    return float(v)


_PARSERS = {
    "schema": str,
    "dim": int,
    "grids": _ints,
    "side_length": float,
    "alphas": _floats,
    "ps": _floats,
    "qs": lambda t: [_q_token(v) for v in _split(t)],
    "ss": _floats,
    "probe_kinds": _split,
    "seeds": int,
    "seed_base": int,
    "bands": _ints,
    "t_final": _floats,
    "steps": int,
    "omega": float,
    "profile": str,
    "split_sums": _bool,
}


@dataclass
class SweepConfig:
    schema: str = SCHEMA
    dim: int = 1
    grids: list = field(default_factory=lambda: [64, 128, 256])
    side_length: float = 1.0
    alphas: list = field(default_factory=lambda: [0.5, 1.0, 1.5, 2.0])
    ps: list = field(default_factory=lambda: [2.0, 4.0])
    qs: list = field(default_factory=lambda: [2.0, "p"])
    ss: list = field(default_factory=lambda: [0.0, 1.0])
    probe_kinds: list = field(default_factory=lambda: list(PROBE_KINDS))
    seeds: int = 8
    seed_base: int = 0
    bands: list = field(default_factory=lambda: [1, 2, 3, 4])
    t_final: list = field(default_factory=lambda: [1.0])
    steps: int = 256
    omega: float = 1.0
    profile: str = "smooth_exponential"
    split_sums: bool = True

    def validate(self) -> None:
        if self.schema != SCHEMA:
            raise ConfigError(f"unsupported schema {self.schema!r}; expected {SCHEMA!r}")
        for kind in self.probe_kinds:
            if kind not in PROBE_KINDS:
                raise ConfigError(f"unknown probe kind {kind!r}")
        if self.profile not in PROFILE_KINDS:
            raise ConfigError(f"unknown profile {self.profile!r}")
        if self.seeds < 0 or self.steps < 1:
            raise ConfigError("seeds must be >= 0 and steps >= 1")
        if any(not 0 < a <= 2 for a in self.alphas):
            raise ConfigError("alphas must lie in (0, 2]")
        if any(p < 1 or math.isinf(p) for p in self.ps):
            raise ConfigError("ps must lie in [1, inf)")
        if any(t <= 0 for t in self.t_final):
            raise ConfigError("t_final values must be positive")
        if self.seeds and self.probe_kinds and not self.bands:
            raise ConfigError("bands must not be empty")
        try:
            for n in self.grids:
                build_filter_bank(TorusGrid(self.dim, n, self.side_length))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def indices(self) -> list[TLIndex]:
        out = []
        for p in self.ps:
            qs = []
            for q in self.qs:
                qv = p if q == "p" else (math.inf if q == "inf" else float(q))
                if qv not in qs:
                    qs.append(qv)
            for q in qs:
                for s in self.ss:
                    out.append(TLIndex(float(s), float(p), float(q)))
        return out

    def to_ini(self) -> str:
        lines = ["[sweep]"]
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, list):
                v = ", ".join(str(x) for x in v)
            elif isinstance(v, bool):
                v = "true" if v else "false"
            lines.append(f"{f.name} = {v}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


def _line_of(text: str, key: str) -> int:
    for n, line in enumerate(text.splitlines(), 1):
        if line.split("=", 1)[0].split(":", 1)[0].strip().lower() == key:
            return n
    return 0


def parse_config(text: str, source: str = "<config>") -> SweepConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    extra = [s for s in parser.sections() if s != "sweep"]
    if extra:
        raise ConfigError(f"{source}: unknown section(s) {extra}; only [sweep] is allowed")
    if not parser.has_section("sweep"):
        raise ConfigError(f"{source}: missing [sweep] section")
    values = {}
    for key, raw in parser.items("sweep"):
        line = _line_of(text, key)
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{line}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](raw)
        except ValueError as exc:
            raise ConfigError(f"{source}:{line}: bad value for {key!r}: {exc}") from exc
    if "schema" not in values:
        raise ConfigError(f"{source}: missing required key 'schema'")
    cfg = SweepConfig(**values)
    try:
        cfg.validate()
    except ConfigError as exc:
        raise ConfigError(f"{source}: {exc}") from exc
    return cfg


def load_config(path) -> SweepConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, str(path))


# ---------------------------------------------------------------------------
# execution


def probe_specs(cfg: SweepConfig) -> list[ProbeSpec]:
    """The probe family; independent of the grid so refinements are comparable."""
    specs = []
    for kind in cfg.probe_kinds:
        for i in range(cfg.seeds):
            band = cfg.bands[i % len(cfg.bands)]
            mode = None
            if kind == "single_mode":
                half = 2 ** (band - 1)
                mode = (half + 1 + (i // len(cfg.bands)) % half,)
            profile = "constant" if kind == "time_modulated" else TIME_PROFILES[i % len(TIME_PROFILES)]
            specs.append(ProbeSpec(kind, band=band, mode=mode, time_profile=profile,
                                   omega=cfg.omega, seed=cfg.seed_base + i))
    return specs


@dataclass
class SplitRow:
    N: int
    T: float
    alpha: float
    p: float
    s: float
    probe_kind: str
    seed: int
    c: float
    near: float
    far: float
    bound: float


SPLIT_COLUMNS = tuple(f.name for f in dataclasses.fields(SplitRow))


def _run_unit(cfg: SweepConfig, n: int, t_final: float, spec: ProbeSpec, indices):
    grid = TorusGrid(cfg.dim, n, cfg.side_length)
    bank = build_filter_bank(grid, BumpProfile(cfg.profile))
    if spec.band is not None and spec.band > bank.j_max:
        spec = dataclasses.replace(spec, band=bank.j_max)
    records, splits, failures = [], [], []
    try:
        f = generate_probe(spec, grid, bank, cfg.steps, t_final)
    except ValueError as exc:
        return records, splits, [f"N={n} T={t_final} {spec}: {exc}"]
    fhat = spectral_frames(f)
    mod_in = band_moduli(fhat, bank)
    in_norms = {idx: time_lp(frame_norms_from_moduli(mod_in, idx, bank), idx.p, t_final)
                for idx in indices}
    for alpha in cfg.alphas:
        mod_out = band_moduli(duhamel_coeffs(fhat, grid, f.dt, alpha), bank)
        for idx in indices:
            out_idx = idx.shifted(alpha / idx.p)
            out_norm = time_lp(frame_norms_from_moduli(mod_out, out_idx, bank), idx.p, t_final)
            try:
                records.append(_record(alpha, idx, bank, t_final, cfg.steps, spec,
                                       in_norms[idx], out_norm))
            except DegenerateProbeError as exc:
                failures.append(f"N={n} T={t_final} alpha={alpha} {idx} {spec.kind}/{spec.seed}: {exc}")
        if cfg.split_sums:
            for p in cfg.ps:
                if p <= 1:
                    continue
                c = measured_decay_rate(float(alpha), float(p), cfg.profile)
                for s in cfg.ss:
                    A = band_lp_norms(mod_in, s, p, bank)
                    near, far, bound = split_sums_from_norms(A, alpha, p, f.dt, c)
                    splits.append(SplitRow(n, t_final, float(alpha), float(p), float(s),
                                           spec.kind, spec.seed, c, near, far, bound))
    return records, splits, failures


@dataclass
class SweepResult:
    config: SweepConfig
    records: list
    splits: list
    failures: list

    def summary(self) -> dict:
        return summarize(self.records, self.splits, self.failures)


def _record_key(r: RatioRecord):
    return (r.dim, r.N, r.T, r.alpha, r.p, r.q, r.s, r.probe_kind, r.seed)


def sweep(cfg: SweepConfig, threads: int = 1) -> SweepResult:
    """Evaluate the full cross product; output order does not depend on ``threads``."""
    cfg.validate()
    indices = cfg.indices()
    if cfg.split_sums:
        for a in cfg.alphas:
            for p in cfg.ps:
                if p > 1:
                    measured_decay_rate(float(a), float(p), cfg.profile)
    units = [(n, t, spec) for n in cfg.grids for t in cfg.t_final for spec in probe_specs(cfg)]
    if not units or not indices or not cfg.alphas:
        return SweepResult(cfg, [], [], [])
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda u: _run_unit(cfg, *u, indices), units))
    else:
        results = [_run_unit(cfg, *u, indices) for u in units]
    records = sorted((r for res in results for r in res[0]), key=_record_key)
    splits = sorted((s for res in results for s in res[1]),
                    key=lambda s: (s.N, s.T, s.alpha, s.p, s.s, s.probe_kind, s.seed))
    failures = sorted(f for res in results for f in res[2])
    return SweepResult(cfg, records, splits, failures)


# ---------------------------------------------------------------------------
# summaries and files


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def cell_key(r) -> str:
    return f"T={r.T:g} alpha={r.alpha:g} p={r.p:g} q={r.q:g} s={r.s:g}"


def summarize(records, splits=(), failures=()) -> dict:
    cells: dict[str, dict] = {}
    for r in records:
        c = cells.setdefault(cell_key(r), {
            "T": r.T, "alpha": r.alpha, "p": r.p, "q": r.q, "s": r.s,
            "in_hypothesis": bool(r.in_hypothesis), "max_ratio_by_N": {}, "count": 0,
        })
        byn = c["max_ratio_by_N"]
        byn[str(r.N)] = max(byn.get(str(r.N), -math.inf), r.ratio)
        c["count"] += 1
    worst_growth = -math.inf
    all_finite = True
    for c in cells.values():
        ns = sorted(c["max_ratio_by_N"], key=int)
        vals = [c["max_ratio_by_N"][n] for n in ns]
        c["finite"] = bool(all(math.isfinite(v) for v in vals))
        c["growth"] = (vals[-1] / vals[-2] - 1.0) if len(vals) >= 2 else None
        if c["in_hypothesis"]:
            all_finite &= c["finite"]
            if c["growth"] is not None:
                worst_growth = max(worst_growth, c["growth"])
    split_consts: dict[str, dict] = {}
    for s in splits:
        key = f"alpha={s.alpha:g} p={s.p:g}"
        d = split_consts.setdefault(key, {"alpha": s.alpha, "p": s.p, "c": s.c,
                                          "near_over_bound": 0.0, "far_over_bound": 0.0})
        if s.bound > 0:
            d["near_over_bound"] = max(d["near_over_bound"], s.near / s.bound)
            d["far_over_bound"] = max(d["far_over_bound"], s.far / s.bound)
    for d in split_consts.values():
        d["K_near"], d["K_far"] = split_constants(d["alpha"], d["p"], d["c"])
        d["within_bounds"] = bool(d["near_over_bound"] <= d["K_near"]
                                  and d["far_over_bound"] <= d["K_far"])
    return {
        "schema": SCHEMA,
        "records": len(records),
        "failures": list(failures),
        "cells": dict(sorted(cells.items())),
        "hypothesis_cells_finite": bool(all_finite),
        "max_growth_in_hypothesis": worst_growth if math.isfinite(worst_growth) else None,
        "growth_limit": GROWTH_LIMIT,
        "split_constants": dict(sorted(split_consts.items())),
        "split_within_bounds": bool(all(d["within_bounds"] for d in split_consts.values())),
    }


def records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def splits_csv(splits) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SPLIT_COLUMNS)
    for s in splits:
        w.writerow([_fmt(getattr(s, c)) for c in SPLIT_COLUMNS])
    return buf.getvalue()


def read_records_csv(path) -> list[RatioRecord]:
    types = {f.name: f.type for f in dataclasses.fields(RatioRecord)}
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ConfigError(f"{path}: unexpected columns {reader.fieldnames}")
        for row in reader:
            kw = {}
            for k, v in row.items():
                t = types[k]
                if t in ("float", float):
                    kw[k] = float(v)
                elif t in ("int", int):
                    kw[k] = int(v)
                elif t in ("bool", bool):
                    kw[k] = v == "true"
                else:
                    kw[k] = v
            out.append(RatioRecord(**kw))
    return out


def ratio_vs_n_dat(summary: dict) -> str:
    lines = []
    for key, c in summary["cells"].items():
        lines.append(f"# {key} in_hypothesis={c['in_hypothesis']}")
        for n in sorted(c["max_ratio_by_N"], key=int):
            lines.append(f"{n} {c['max_ratio_by_N'][n]!r}")
        lines.append("")
        lines.append("")
    return "\n".join(lines)


def weight_slopes_dat(cfg: SweepConfig) -> str:
    j_max = max(build_filter_bank(TorusGrid(cfg.dim, n, cfg.side_length)).j_max for n in cfg.grids)
    lines = []
    for a in cfg.alphas:
        for p in cfg.ps:
            if p <= 1:
                continue
            c = measured_decay_rate(float(a), float(p), cfg.profile)
            for kind in ("near", "far"):
                slope, deltas, vals = weight_sum_slope(kind, a, p, j_max, c, samples=101)
                lines.append(f"# {kind} alpha={a:g} p={p:g} j_max={j_max} slope={slope!r}")
                lines.extend(f"{d!r} {v!r}" for d, v in zip(deltas, vals))
                lines.append("")
                lines.append("")
    return "\n".join(lines)


def write_outputs(result: SweepResult, out_dir, threads: int = 1, command: str = "sweep") -> dict:
    """Write CSV, JSON and plot data plus a manifest; returns the manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary = result.summary()
    files = {
        "records.csv": records_csv(result.records),
        "summary.json": json.dumps(summary, indent=2, sort_keys=True) + "\n",
        "ratio_vs_N.dat": ratio_vs_n_dat(summary),
    }
    if result.config.split_sums:
        files["split_sums.csv"] = splits_csv(result.splits)
        files["weight_slopes.dat"] = weight_slopes_dat(result.config)
    for name, text in files.items():
        (out / name).write_text(text)
    manifest = {
        "schema": SCHEMA,
        "package_version": __version__,
        "command": command,
        "config": result.config.as_dict(),
        "config_ini": result.config.to_ini(),
        "threads": threads,
        "rng": "numpy.random.default_rng((seed, probe_kind_index)), PCG64",
        "files": {name: hashlib.sha256(text.encode()).hexdigest() for name, text in files.items()},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest
