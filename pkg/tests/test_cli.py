import csv
import io
import json
import subprocess
import sys

import pytest

from mirrorx.cli import main, read_config


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_branch_six_rows(capsys):
    code, out, _ = run(capsys, "branch", "--m", "2", "--n", "10")
    assert code == 0
    pairs = json.loads(out)["pairs"]
    assert len(pairs) == 6
    rows = list(csv.reader(io.StringIO(run(capsys, "branch", "--m", "2", "--n", "10", "--format", "csv")[1])))
    assert rows[0][:3] == ["lambda", "lambdaDot", "mu"] and len(rows) == 7


def test_output_is_deterministic(capsys):
    first = run(capsys, "branch", "--m", "2", "--n", "10")[1]
    assert run(capsys, "branch", "--m", "2", "--n", "10")[1] == first
    fus = run(capsys, "fusion", "--algebra", "sl2", "--level", "4")[1]
    assert run(capsys, "fusion", "--algebra", "sl2", "--level", "4")[1] == fus


def test_fusion_iso_check(capsys):
    code, out, _ = run(capsys, "fusion", "--algebra", "sl10", "--level", "2", "--iso-check")
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and rep["triplesChecked"] == 216


def test_fusion_text(capsys):
    code, out, _ = run(capsys, "fusion", "--algebra", "sl2", "--level", "2", "--format", "text")
    assert code == 0 and out.splitlines()[0] == "0 x 0 = 0"


def test_character(capsys):
    code, out, _ = run(capsys, "character", "--algebra", "sl2", "--level", "10", "--weight", "6", "--depth", "3")
    assert code == 0
    assert json.loads(out)["coeffs"][0] in (7, "7")
    text = run(capsys, "character", "--algebra", "sl2", "--level", "10", "--weight", "6", "--depth", "3", "--format", "text")[1]
    assert text.startswith("q^(")


def test_appendix_d662(capsys):
    code, out, _ = run(capsys, "appendix", "--case", "D662")
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and len(rep["certificates"]) == 1


def test_kz_report(capsys):
    code, out, _ = run(capsys, "kz", "--k", "10", "--labels", "6,6,6,6")
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and len(rep["B"]) == 5


def test_certify_b2(capsys, tmp_path):
    path = tmp_path / "cert.json"
    code, out, _ = run(capsys, "certify", "--preset", "B2", "--output", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["kind"] == "certificate"


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "branch", "--m", "2")[0] == 2
    assert run(capsys, "kz", "--k", "10", "--labels", "6,6")[0] == 2
    assert run(capsys, "branch", "--m", "2", "--n", "10", "--format", "xml")[0] == 2
    assert run(capsys, "character", "--algebra", "sl2", "--level", "10", "--depth", "-1")[0] == 2


def test_computation_errors(capsys):
    code, _, err = run(capsys, "kz", "--k", "10", "--labels", "6,0,0,0")
    assert code == 1 and "EmptySubspace" in err
    assert run(capsys, "fusion", "--algebra", "so5", "--level", "2")[0] == 1
    assert run(capsys, "character", "--algebra", "sl10", "--level", "2", "--depth", "40")[0] == 1


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# two by ten\nm = 2\nn = 10\nformat=csv\n")
    code, out, _ = run(capsys, "branch", "--config", str(cfg))
    assert code == 0 and out.startswith("lambda,")
    code, out, _ = run(capsys, "branch", "--config", str(cfg), "--format", "json")
    assert code == 0 and len(json.loads(out)["pairs"]) == 6


def test_config_boolean_and_errors(capsys, tmp_path):
    cfg = tmp_path / "iso.cfg"
    cfg.write_text("algebra=sl10\nlevel=2\niso-check=true\n")
    code, out, _ = run(capsys, "fusion", "--config", str(cfg))
    assert code == 0 and json.loads(out)["pass"]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour=blue\n")
    assert run(capsys, "fusion", "--algebra", "sl2", "--level", "2", "--config", str(bad))[0] == 2
    assert run(capsys, "fusion", "--algebra", "sl2", "--level", "2", "--config", str(tmp_path / "missing"))[0] == 2


def test_read_config(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("lambda-tilde = 1  # sector\n\n")
    assert read_config(str(cfg)) == {"lambda_tilde": "1"}


def test_jobs_env(capsys, monkeypatch):
    from mirrorx import cli

    seen = {}

    def fake(args):
        seen["jobs"] = args.jobs
        return "", True

    monkeypatch.setitem(cli.COMMANDS, "certify", fake)
    monkeypatch.setenv("MIRRORX_JOBS", "3")
    assert run(capsys, "certify", "--preset", "B2")[0] == 0
    assert seen["jobs"] == 3
    assert run(capsys, "certify", "--preset", "B2", "--jobs", "2")[0] == 0
    assert seen["jobs"] == 2
    monkeypatch.setenv("MIRRORX_JOBS", "many")
    assert run(capsys, "certify", "--preset", "B2")[0] == 2


@pytest.mark.slow
def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "mirrorx", "appendix", "--case", "D662", "--format", "text"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("D662")


def test_config_bad_value(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("level=abc\n")
    assert run(capsys, "fusion", "--algebra", "sl2", "--config", str(cfg))[0] == 2


@pytest.mark.slow
def test_certify_sl10_mirror(capsys):
    code, out, _ = run(capsys, "certify", "--preset", "sl10-mirror", "--jobs", "4", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "certificate for sl10-mirror: pass"
    assert len(lines) == 8
