"""Command-line contract: config handling, outputs, determinism."""

import json
import subprocess

import pytest

from qdecay.cli import RunConfig, _suite_report, main
from qdecay.validation import SuiteResult


def _read(path):
    return path.read_bytes()


def test_css_run_layout_and_determinism(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    args = ["css", "--beta0", "0.8", "--theta", "0", "--t-end", "4",
            "--points", "9", "--grid-points", "7"]
    assert main(args + ["--out", str(out_a)]) == 0
    assert main(args + ["--out", str(out_b)]) == 0
    names = ["det.csv", "entropy.csv", "mandel_q.csv", "min_wigner.csv",
             "pn_head.csv", "vacuum_fidelity.csv", "summary.json"]
    for name in names:
        assert (out_a / name).exists(), name
        # manifests differ in the out path by construction; data must not
        assert _read(out_a / name) == _read(out_b / name), name
    man_a = json.loads((out_a / "manifest.json").read_text())
    man_b = json.loads((out_b / "manifest.json").read_text())
    man_a["parameters"].pop("out")
    man_b["parameters"].pop("out")
    assert man_a == man_b
    header = (out_a / "det.csv").read_text().splitlines()[0]
    assert header.startswith("kt[dimensionless],t[model units],")


def test_manifest_round_trip_reproduces_run(tmp_path):
    first = tmp_path / "first"
    assert main(["css", "--beta0", "1.1", "--t-end", "2", "--points", "5",
                 "--grid-points", "5", "--out", str(first)]) == 0
    manifest = json.loads((first / "manifest.json").read_text())
    echo = tmp_path / "echo.json"
    echo.write_text(json.dumps(manifest["parameters"]))
    second = tmp_path / "second"
    assert main(["css", "--config", str(echo), "--out", str(second)]) == 0
    assert _read(first / "det.csv") == _read(second / "det.csv")
    assert manifest["version"]


def test_unknown_config_field_names_the_field(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"beta0": 0.8, "betamax": 2.0}))
    code = main(["css", "--config", str(cfg), "--out", str(tmp_path / "x")])
    assert code == 2
    assert "betamax" in capsys.readouterr().err


def test_family_mismatch_rejected(tmp_path, capsys):
    cfg = tmp_path / "fam.json"
    cfg.write_text(json.dumps({"family": "gss"}))
    assert main(["css", "--config", str(cfg)]) == 2
    assert "family" in capsys.readouterr().err


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"beta0": 0.5, "t_end": 2.0, "n_points": 5,
                               "grid_points": 5}))
    out = tmp_path / "run"
    assert main(["css", "--config", str(cfg), "--beta0", "0.9",
                 "--out", str(out)]) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["parameters"]["beta0"] == 0.9
    assert manifest["parameters"]["t_end"] == 2.0


def test_invalid_grid_rejected(tmp_path, capsys):
    assert main(["css", "--t-end", "0", "--out", str(tmp_path)]) == 2
    assert "monotone" in capsys.readouterr().err


def test_warm_bath_propagates_as_computation_error(tmp_path, capsys):
    code = main(["css", "--nbar", "0.5", "--t-end", "1", "--points", "3",
                 "--grid-points", "5", "--out", str(tmp_path / "x")])
    assert code == 1
    assert "UnsupportedRegime" in capsys.readouterr().err


def test_gss_absent_scalars_are_null(tmp_path):
    out = tmp_path / "gss"
    assert main(["gss", "--r0", "1", "--nu0", "3", "--t-end", "2",
                 "--points", "4", "--grid-points", "5",
                 "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["thermal_peak_time"] is None
    assert summary["squeezing_visible_state"] is False


def test_fidelity_run_summary(tmp_path):
    out = tmp_path / "fid"
    assert main(["fidelity", "--beta0", "0.8", "--r0", "1", "--t-end", "60",
                 "--points", "4", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["initial"] == pytest.approx(0.933075214048846, rel=1e-12)
    assert summary["final"] == pytest.approx(1.0, abs=1e-4)
    lines = (out / "fidelity.csv").read_text().splitlines()
    assert lines[0].split(",")[2] == "fidelity[dimensionless]"
    assert len(lines) == 5


def test_figure_unknown_tag_lists_valid_tags(tmp_path, capsys):
    assert main(["figure", "--tag", "nope", "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "valid tags" in err and "vacuum-fidelity" in err


def test_figure_list_flag(capsys):
    assert main(["figure", "--list"]) == 0
    tags = capsys.readouterr().out.split()
    assert "vacuum-fidelity" in tags and len(tags) == 21


def test_figure_emits_csv_and_checksum_manifest(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    for out in (out_a, out_b):
        assert main(["figure", "--tag", "css-det-0.8",
                     "--out", str(out)]) == 0
    csv_a = _read(out_a / "css-det-0.8.csv")
    assert csv_a == _read(out_b / "css-det-0.8.csv")
    man_a = json.loads((out_a / "css-det-0.8-manifest.json").read_text())
    man_b = json.loads((out_b / "css-det-0.8-manifest.json").read_text())
    assert man_a["sha256"] == man_b["sha256"]
    assert man_a["rows"] > 0 and man_a["parameters"]


def test_thread_cap_env_validated(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("DECAY_THREADS", "zero")
    code = main(["figure", "--tag", "css-det-0.8",
                 "--out", str(tmp_path / "x")])
    assert code == 2
    assert "DECAY_THREADS" in capsys.readouterr().err


def test_suite_report_writer_and_exit_codes(tmp_path, capsys):
    ok = SuiteResult(name="alpha", passed=True, tolerance=1e-6,
                     worst={"gap": 1e-9}, notes=["fine"], elapsed=0.1)
    bad = SuiteResult(name="beta", passed=False, tolerance=1e-6,
                      worst={"gap": 2e-3}, notes=[], elapsed=0.2)
    cfg = RunConfig(family="validate", out=str(tmp_path))
    assert _suite_report([ok], tmp_path, cfg, "validate") == 0
    assert _suite_report([ok, bad], tmp_path, cfg, "validate") == 3
    capsys.readouterr()
    rows = (tmp_path / "validate.csv").read_text().splitlines()
    assert rows[0] == "suite,observable,worst,tolerance,passed,elapsed[s]"
    assert any(line.startswith("beta,gap") for line in rows)
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["all_passed"] is False


def test_console_script_is_installed():
    proc = subprocess.run(["decay", "figure", "--list"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert "vacuum-fidelity" in proc.stdout
