"""Sweep configuration, execution, determinism and artifacts."""

import hashlib
import json
import math

import pytest

from fractl.sweep import (
    SCHEMA,
    ConfigError,
    SweepConfig,
    parse_config,
    probe_specs,
    read_records_csv,
    records_csv,
    summarize,
    sweep,
    write_outputs,
)

SMALL = f"""
[sweep]
schema = {SCHEMA}
grids = 32, 64
alphas = 1, 2
ps = 2, 4
qs = 2, p
ss = 0
probe_kinds = single_mode, white_noise, time_modulated
seeds = 2
steps = 16
"""


@pytest.fixture(scope="module")
def small_result():
    return sweep(parse_config(SMALL))


def without_timestamp(csv_text):
    return [line.rsplit(",", 1)[0] for line in csv_text.splitlines()]


class TestConfig:
    def test_defaults(self):
        cfg = parse_config(f"[sweep]\nschema = {SCHEMA}\n")
        assert cfg == SweepConfig()
        assert cfg.grids == [64, 128, 256] and cfg.seeds == 8 and cfg.steps == 256

    def test_values(self):
        cfg = parse_config(SMALL)
        assert cfg.grids == [32, 64] and cfg.qs == [2.0, "p"] and cfg.steps == 16
        assert [str(i) for i in cfg.indices()] == [
            "TLIndex(s=0.0, p=2.0, q=2.0)",
            "TLIndex(s=0.0, p=4.0, q=2.0)",
            "TLIndex(s=0.0, p=4.0, q=4.0)",
        ]

    def test_ini_round_trip(self):
        cfg = parse_config(SMALL)
        assert parse_config(cfg.to_ini()) == cfg

    @pytest.mark.parametrize("text,match", [
        (f"[sweep]\nschema = {SCHEMA}\ngridz = 64\n", r"<config>:3: unknown key 'gridz'"),
        (f"[sweep]\nschema = {SCHEMA}\n\nsteps = many\n", r"<config>:4: bad value for 'steps'"),
        (f"[sweep]\nschema = {SCHEMA}\nsplit_sums = maybe\n", r":3: bad value for 'split_sums'"),
        ("[sweep]\ngrids = 64\n", "missing required key 'schema'"),
        ("[sweep]\nschema = fractl.sweep/0\n", "unsupported schema"),
        (f"[sweep]\nschema = {SCHEMA}\n[extra]\nx = 1\n", "unknown section"),
        ("grids = 64\n", "<config>"),
        (f"[sweep]\nschema = {SCHEMA}\ngrids = 10\n", "at least 2"),
        (f"[sweep]\nschema = {SCHEMA}\nalphas = 2.5\n", "alphas"),
        (f"[sweep]\nschema = {SCHEMA}\nprobe_kinds = dirac\n", "unknown probe kind"),
        (f"[sweep]\nschema = {SCHEMA}\nprofile = box\n", "unknown profile"),
    ])
    def test_errors(self, text, match):
        with pytest.raises(ConfigError, match=match):
            parse_config(text)

    def test_inline_comments(self):
        cfg = parse_config(f"[sweep]\nschema = {SCHEMA}\nseeds = 3  # per kind\n")
        assert cfg.seeds == 3


def test_empty_config_gives_no_records():
    res = sweep(parse_config(f"[sweep]\nschema = {SCHEMA}\nprobe_kinds =\n"))
    assert res.records == [] and res.splits == []


def test_probe_specs_are_grid_independent():
    specs = probe_specs(SweepConfig())
    assert len(specs) == 40
    modes = {s.mode for s in specs if s.kind == "single_mode"}
    # modes lie in (2^{b-1}, 2^b]; band 1 admits only k = 2
    assert all(2 ** (s.band - 1) < s.mode[0] <= 2**s.band for s in specs if s.kind == "single_mode")
    assert len(modes) == 7


def test_record_count(small_result):
    # grids x kinds x seeds x alphas x indices
    assert len(small_result.records) == 2 * 3 * 2 * 2 * 3
    assert not small_result.failures


def test_summary(small_result):
    s = small_result.summary()
    assert s["records"] == len(small_result.records)
    assert s["hypothesis_cells_finite"]
    assert s["split_within_bounds"]
    cell = s["cells"]["T=1 alpha=1 p=4 q=2 s=0"]
    assert set(cell["max_ratio_by_N"]) == {"32", "64"}
    assert cell["growth"] == pytest.approx(cell["max_ratio_by_N"]["64"] / cell["max_ratio_by_N"]["32"] - 1)


def test_outside_hypothesis_is_reported_not_judged():
    recs = sweep(parse_config(SMALL.replace("qs = 2, p", "qs = 1.5, inf"))).records
    s = summarize(recs)
    assert all(not c["in_hypothesis"] for c in s["cells"].values())
    assert s["max_growth_in_hypothesis"] is None


@pytest.mark.parametrize("threads", [2, 4])
def test_thread_count_does_not_change_output(small_result, threads):
    other = sweep(parse_config(SMALL), threads=threads)
    assert without_timestamp(records_csv(other.records)) == without_timestamp(records_csv(small_result.records))
    assert other.splits == small_result.splits


def test_csv_round_trip(tmp_path, small_result):
    (tmp_path / "r.csv").write_text(records_csv(small_result.records))
    assert read_records_csv(tmp_path / "r.csv") == small_result.records


def test_csv_rejects_foreign_columns(tmp_path):
    (tmp_path / "r.csv").write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        read_records_csv(tmp_path / "r.csv")


def test_outputs_and_manifest(tmp_path, small_result):
    manifest = write_outputs(small_result, tmp_path, threads=1)
    for name, digest in manifest["files"].items():
        assert hashlib.sha256((tmp_path / name).read_bytes()).hexdigest() == digest
    assert set(manifest["files"]) == {"records.csv", "summary.json", "ratio_vs_N.dat",
                                      "split_sums.csv", "weight_slopes.dat"}
    on_disk = json.loads((tmp_path / "manifest.json").read_text())
    assert on_disk["schema"] == SCHEMA
    # the echoed config reproduces the run
    again = sweep(parse_config(on_disk["config_ini"]))
    assert without_timestamp(records_csv(again.records)) == without_timestamp(
        (tmp_path / "records.csv").read_text())
    dat = (tmp_path / "ratio_vs_N.dat").read_text()
    assert "# T=1 alpha=2 p=4 q=4 s=0" in dat
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert math.isfinite(summary["max_growth_in_hypothesis"])
