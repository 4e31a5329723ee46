"""Command-line subcommands and exit codes."""

import json

import pytest

from fractl.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from fractl.sweep import SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_core_default(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-core", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "FAIL" not in out
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["schema"] == SCHEMA and manifest["command"] == "verify-core"
    assert "checks.csv" in manifest["files"]


def test_verify_core_minimum_grid(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-core", "--grid", "16,2x16", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "d=1 N=16: j_max=2" in out and "d=2 N=16: j_max=2" in out


@pytest.mark.parametrize("grid", ["10", "1x12", "3x16", "abc"])
def test_verify_core_bad_grid(tmp_path, capsys, grid):
    code, _, err = run(capsys, "verify-core", "--grid", grid, "--out", str(tmp_path))
    assert code == EXIT_USAGE
    assert "error" in err


def test_verify_kernel(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-kernel", "--alpha", "1,2", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "gaussian closed form" in out and "poisson closed form" in out
    assert (tmp_path / "decay_alpha2_p2_smooth_exponential.json").exists()


def test_verify_kernel_bad_alpha(tmp_path, capsys):
    assert run(capsys, "verify-kernel", "--alpha", "3", "--out", str(tmp_path))[0] == EXIT_USAGE


def test_verify_khinchine(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-khinchine", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out.count("PASS") == 5
    assert (tmp_path / "khinchine_reports.csv").read_text().startswith("n,p,")


def test_verify_estimate(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-estimate", "--grid", "32,64", "--alpha", "1.5", "--p", "4",
                       "--q", "2", "--s", "1", "--T", "0.5", "--steps", "32", "--seeds", "2",
                       "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "T=0.5 alpha=1.5 p=4 q=2 s=1" in out
    cfg = json.loads((tmp_path / "manifest.json").read_text())["config"]
    assert cfg["grids"] == [32, 64] and cfg["steps"] == 32


def test_growth_limit_override_fails(tmp_path, capsys):
    # a negative limit cannot be met, so the audit reports a failure
    code, out, _ = run(capsys, "verify-estimate", "--grid", "32,64", "--steps", "8", "--seeds", "1",
                       "--growth-limit", "-1", "--out", str(tmp_path))
    assert code == EXIT_FAIL and out.strip().endswith("FAIL")


def test_sweep_and_report(tmp_path, capsys):
    cfg = tmp_path / "s.ini"
    cfg.write_text(f"[sweep]\nschema = {SCHEMA}\ngrids = 32, 64\nalphas = 1\nps = 2\nqs = 2\nss = 0\n"
                   "seeds = 1\nsteps = 8\n")
    out_dir = tmp_path / "run"
    code, out, _ = run(capsys, "sweep", str(cfg), "--out", str(out_dir))
    assert code == EXIT_OK
    assert out.splitlines()[0].startswith("10 records")
    code, out, _ = run(capsys, "report", str(out_dir / "records.csv"), "--out", str(tmp_path / "rep"))
    assert code == EXIT_OK
    assert json.loads((tmp_path / "rep" / "summary.json").read_text())["records"] == 10


def test_sweep_threads_identical(tmp_path, capsys):
    cfg = tmp_path / "s.ini"
    cfg.write_text(f"[sweep]\nschema = {SCHEMA}\ngrids = 32\nalphas = 0.5, 2\nseeds = 2\nsteps = 8\n")
    for threads in (1, 3):
        assert run(capsys, "sweep", str(cfg), "--threads", str(threads), "--out", str(tmp_path / str(threads)))[0] == 0
    a, b = ((tmp_path / t / "records.csv").read_text().splitlines() for t in ("1", "3"))
    assert [r.rsplit(",", 1)[0] for r in a] == [r.rsplit(",", 1)[0] for r in b]
    for name in ("split_sums.csv", "summary.json", "weight_slopes.dat"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "3" / name).read_bytes()


def test_malformed_config(tmp_path, capsys):
    cfg = tmp_path / "bad.ini"
    cfg.write_text(f"[sweep]\nschema = {SCHEMA}\nseeds = 2\nalpha = 1\n")
    code, _, err = run(capsys, "sweep", str(cfg), "--out", str(tmp_path / "o"))
    assert code == EXIT_USAGE
    assert "bad.ini:4: unknown key 'alpha'" in err


def test_missing_config(tmp_path, capsys):
    assert run(capsys, "sweep", str(tmp_path / "nope.ini"))[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["sweep", "--threads", "0"], ["verify-core", "--bogus"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.startswith("fractl ")
