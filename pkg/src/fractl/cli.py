"""Command-line front end.

Exit status is 0 when every check passes, 1 on a verification failure and 2
on a usage or configuration error.  Every run writes ``manifest.json`` to its
output directory with the resolved configuration and the schema id.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .littlewood_paley import PROFILE_KINDS, build_filter_bank
from .spectral_core import TorusGrid
from .sweep import (
    GROWTH_LIMIT,
    SCHEMA,
    ConfigError,
    SweepConfig,
    load_config,
    read_records_csv,
    summarize,
    sweep,
    write_outputs,
)
from .verify import DEFAULT_CORE_GRIDS, format_table, verify_core, verify_kernel, verify_khinchine

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _q_values(text: str) -> list:
    out = []
    for v in (t.strip() for t in text.split(",")):
        if v in ("p", "inf"):
            out.append(v)
        elif v:
            try:
                out.append(float(v))
            except ValueError as exc:
                raise argparse.ArgumentTypeError(str(exc)) from exc
    return out


def _grid_specs(text: str) -> list[tuple[int, int]]:
    """``"64,128"`` or ``"1x64,2x32"``; a bare N means d=1."""
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        d, _, n = tok.rpartition("x")
        try:
            out.append((int(d) if d else 1, int(n)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad grid {tok!r}") from exc
    return out


def _profiles(text: str) -> list[str]:
    kinds = [t.strip() for t in text.split(",") if t.strip()]
    for k in kinds:
        if k not in PROFILE_KINDS:
            raise argparse.ArgumentTypeError(f"unknown profile {k!r}; choose from {PROFILE_KINDS}")
    return kinds


def _make_grids(specs, side_length=1.0) -> list[TorusGrid]:
    grids = []
    for d, n in specs:
        try:
            grid = TorusGrid(d, n, side_length)
            build_filter_bank(grid)
        except ValueError as exc:
            raise ConfigError(f"grid d={d} N={n}: {exc}") from exc
        grids.append(grid)
    return grids


def _write_manifest(out: Path, command: str, config: dict, files: dict) -> None:
    manifest = {
        "schema": SCHEMA,
        "package_version": __version__,
        "command": command,
        "config": config,
        "files": {name: hashlib.sha256((out / name).read_bytes()).hexdigest() for name in files},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _write_checks(out: Path, checks) -> str:
    name = "checks.csv"
    with open(out / name, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["name", "value", "tolerance", "passed", "note"])
        for c in checks:
            w.writerow([c.name, repr(c.value), repr(c.tolerance), c.passed, c.note])
    return name


def _finish_checks(args, checks, config: dict, extra_files=()) -> int:
    print(format_table(checks))
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = [_write_checks(out, checks), *extra_files]
    _write_manifest(out, args.command, config, files)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify_core(args) -> int:
    specs = args.grid or [(d, n) for d, ns in DEFAULT_CORE_GRIDS.items() for n in ns]
    grids = _make_grids(specs)
    profiles = args.profile or list(PROFILE_KINDS)
    for g in grids:
        print(f"d={g.dim} N={g.points_per_axis}: j_max={build_filter_bank(g).j_max}")
    checks = verify_core(grids, profiles)
    config = {"grids": [list(s) for s in specs], "profiles": profiles}
    return _finish_checks(args, checks, config)


def cmd_verify_kernel(args) -> int:
    alphas = args.alpha or [0.5, 1.0, 1.5, 2.0]
    if any(not 0 < a <= 2 for a in alphas):
        raise ConfigError("alpha values must lie in (0, 2]")
    p = args.p[0] if args.p else 2.0
    if p < 1:
        raise ConfigError("p must be >= 1")
    profiles = args.profile or ["smooth_exponential"]
    out = Path(args.out)
    checks = verify_kernel(alphas, p, profiles, out_dir=out)
    reports = sorted(f.name for f in out.glob("decay_*"))
    config = {"alphas": alphas, "p": p, "profiles": profiles}
    return _finish_checks(args, checks, config, reports)


def cmd_verify_khinchine(args) -> int:
    out = Path(args.out)
    checks = verify_khinchine(out_dir=out, seed=args.seed_base)
    return _finish_checks(args, checks, {"seed_base": args.seed_base}, ["khinchine_reports.csv"])


def _apply_overrides(cfg: SweepConfig, args) -> SweepConfig:
    if args.grid:
        dims = {d for d, _ in args.grid}
        if len(dims) != 1:
            raise ConfigError("a sweep uses a single dimension")
        cfg.dim = dims.pop()
        cfg.grids = [n for _, n in args.grid]
    for attr, name in (("alpha", "alphas"), ("p", "ps"), ("q", "qs"), ("s", "ss"), ("T", "t_final")):
        if getattr(args, attr):
            setattr(cfg, name, getattr(args, attr))
    if args.steps is not None:
        cfg.steps = args.steps
    if args.seeds is not None:
        cfg.seeds = args.seeds
    if args.seed_base is not None:
        cfg.seed_base = args.seed_base
    if args.profile:
        if len(args.profile) != 1:
            raise ConfigError("a sweep uses a single profile")
        cfg.profile = args.profile[0]
    cfg.validate()
    return cfg


def _sweep_verdict(summary: dict, limit: float) -> bool:
    growth = summary["max_growth_in_hypothesis"]
    ok = summary["hypothesis_cells_finite"] and (growth is None or growth < limit)
    if summary["split_constants"]:
        ok = ok and summary["split_within_bounds"]
    return bool(ok)


def _print_summary(summary: dict, limit: float) -> None:
    print(f"{summary['records']} records, {len(summary['failures'])} failures")
    for key, c in summary["cells"].items():
        ratios = " ".join(f"N={n}:{v:.6g}" for n, v in sorted(c["max_ratio_by_N"].items(), key=lambda kv: int(kv[0])))
        growth = "n/a" if c["growth"] is None else f"{c['growth']:+.3e}"
        tag = "" if c["in_hypothesis"] else "  (outside 2<=q<=p)"
        print(f"{key}: {ratios} growth={growth}{tag}")
    for key, d in summary["split_constants"].items():
        print(f"split {key}: I/bound={d['near_over_bound']:.4g} <= {d['K_near']:.4g}, "
              f"II/bound={d['far_over_bound']:.4g} <= {d['K_far']:.4g}: "
              f"{'PASS' if d['within_bounds'] else 'FAIL'}")
    growth = summary["max_growth_in_hypothesis"]
    print(f"hypothesis cells finite: {summary['hypothesis_cells_finite']}; "
          f"max growth {growth if growth is not None else 'n/a'} (limit {limit})")


def _run_sweep(cfg: SweepConfig, args, command: str) -> int:
    result = sweep(cfg, threads=args.threads)
    write_outputs(result, args.out, threads=args.threads, command=command)
    summary = result.summary()
    _print_summary(summary, args.growth_limit)
    ok = _sweep_verdict(summary, args.growth_limit)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    cfg = load_config(args.config) if args.config else SweepConfig()
    return _run_sweep(_apply_overrides(cfg, args), args, "sweep")


def cmd_verify_estimate(args) -> int:
    cfg = SweepConfig(grids=[128, 256], alphas=[1.0], ps=[2.0], qs=[2.0], ss=[0.0])
    return _run_sweep(_apply_overrides(cfg, args), args, "verify-estimate")


def cmd_report(args) -> int:
    try:
        records = read_records_csv(args.csv)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.csv}: {exc}") from exc
    summary = summarize(records)
    _print_summary(summary, args.growth_limit)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    _write_manifest(out, "report", {"csv": str(args.csv), "growth_limit": args.growth_limit},
                    ["summary.json"])
    ok = _sweep_verdict(summary, args.growth_limit)
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fractl", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--version", action="version", version=f"fractl {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def common(p, *, default_out):
        p.add_argument("--out", default=default_out, help="output directory (default: %(default)s)")

    def cell_flags(p):
        p.add_argument("--grid", type=_grid_specs, help="grid sizes, e.g. 64,128 or 2x64")
        p.add_argument("--alpha", type=_floats, help="comma-separated alpha values in (0, 2]")
        p.add_argument("--p", type=_floats, help="comma-separated integrability exponents")
        p.add_argument("--q", type=_q_values, help="comma-separated q values; 'p' means q = p")
        p.add_argument("--s", type=_floats, help="comma-separated smoothness indices")
        p.add_argument("--T", type=_floats, help="comma-separated final times")
        p.add_argument("--steps", type=int, help="time steps M")
        p.add_argument("--seeds", type=int, help="probes per kind")
        p.add_argument("--seed-base", type=int, default=None)
        p.add_argument("--profile", type=_profiles, help="bump profile kind")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--growth-limit", type=float, default=GROWTH_LIMIT,
                       help="allowed relative growth of the max ratio per refinement")

    p = sub.add_parser("verify-core", help="transform, partition and reconstruction invariants")
    p.add_argument("--grid", type=_grid_specs, help="grids, e.g. 16,64 or 2x32 (default: full set)")
    p.add_argument("--profile", type=_profiles)
    common(p, default_out="fractl-out/verify-core")
    p.set_defaults(func=cmd_verify_core)

    p = sub.add_parser("verify-kernel", help="kernel oracles and band-kernel decay fits")
    p.add_argument("--alpha", type=_floats)
    p.add_argument("--p", type=_floats)
    p.add_argument("--profile", type=_profiles)
    common(p, default_out="fractl-out/verify-kernel")
    p.set_defaults(func=cmd_verify_kernel)

    p = sub.add_parser("verify-khinchine", help="exact Khinchine enumeration suite")
    p.add_argument("--seed-base", type=int, default=0)
    common(p, default_out="fractl-out/verify-khinchine")
    p.set_defaults(func=cmd_verify_khinchine)

    p = sub.add_parser("verify-estimate", help="ratio audit for a single parameter cell")
    cell_flags(p)
    common(p, default_out="fractl-out/verify-estimate")
    p.set_defaults(func=cmd_verify_estimate)

    p = sub.add_parser("sweep", help="run a parameter sweep from a config file")
    p.add_argument("config", nargs="?", help="INI config; defaults to the built-in configuration")
    cell_flags(p)
    common(p, default_out="fractl-out/sweep")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="re-summarize an existing records CSV")
    p.add_argument("csv")
    p.add_argument("--growth-limit", type=float, default=GROWTH_LIMIT)
    common(p, default_out="fractl-out/report")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"fractl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        print(f"fractl: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
