"""Command-line driver: subcommands, output formats, exit codes, determinism."""

import json
import math

import pytest

from llab.cli import EXIT_CONFIG, EXIT_PRECONDITION, main

UNIT_HALF = {
    "domain": "half_line",
    "segments": [{"from": 0.0, "to": 1.0, "coef": 1.0, "exp": 0.0}],
    "tail": {"coef": 1.0, "exp": 0.0},
}
UNIT_LINE = dict(UNIT_HALF, domain="line")
ABS_LINE = {
    "domain": "line",
    "segments": [{"from": 0.0, "to": 1.0, "coef": 1.0, "exp": 1.0}],
    "tail": {"coef": 1.0, "exp": 1.0},
}


@pytest.fixture
def configs(tmp_path):
    paths = {}
    for name, obj in [("w1", UNIT_HALF), ("u1", UNIT_LINE), ("uabs", ABS_LINE)]:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(obj))
        paths[name] = str(path)
    paths["dir"] = tmp_path
    return paths


def test_classes_json_output(configs, capsys):
    rc = main(["classes", "--w", configs["w1"], "--u", configs["uabs"], "--p", "2"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["Delta2"]["holds"] and out["Bp"]["holds"] and out["BstarInf"]["holds"]
    assert out["AInf"]["holds"] and not out["A1"]["holds"]


def test_indices_csv_and_summary(configs, capsys, tmp_path):
    out_csv = tmp_path / "idx.csv"
    rc = main(
        [
            "indices",
            "--u",
            configs["u1"],
            "--w",
            configs["w1"],
            "--p",
            "2",
            "--out",
            str(out_csv),
        ]
    )
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["alpha"] == pytest.approx(0.5, abs=1e-2)
    assert summary["beta"] == pytest.approx(0.5, abs=1e-2)
    assert summary["maximal"] == "bounded"
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "t,wbar_u,underline_wu,direction,budget,seed"
    assert len(lines) == 21  # 10 upper + 10 lower samples


def test_extremal_reports_identities(configs, capsys, tmp_path):
    out_csv = tmp_path / "ext.csv"
    rc = main(
        [
            "extremal",
            "--interval",
            "0",
            "4",
            "--set",
            "1,2",
            "--lambdas",
            "8",
            "--out",
            str(out_csv),
        ]
    )
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["s"] == pytest.approx(4.0)
    assert summary["mean"] == pytest.approx(summary["mean_formula"], rel=1e-12)
    assert summary["max_identity_error"] < 1e-9
    header = out_csv.read_text().splitlines()[0]
    assert header == "lambda,k,lo,hi,measure_check"


def test_certify_closed_form(configs, capsys):
    rc = main(
        [
            "certify",
            "--u",
            configs["u1"],
            "--w",
            configs["w1"],
            "--interval",
            "0",
            str(math.e),
            "--set",
            "0,1",
            "--p",
            "2",
        ]
    )
    assert rc == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["lower_bound"] == pytest.approx((2.0 * math.e - 1.0) ** -0.5, abs=1e-3)


def test_opnorm_csv(configs, capsys, tmp_path):
    out_csv = tmp_path / "op.csv"
    rc = main(
        [
            "opnorm",
            "--operator",
            "maximal",
            "--u",
            configs["u1"],
            "--w",
            configs["w1"],
            "--family",
            "indicators",
            "--count",
            "3",
            "--p",
            "2",
            "--out",
            str(out_csv),
        ]
    )
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["operator"] == "maximal" and summary["max_ratio"] > 0.0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "test_id,input_norm,output_norm,ratio"
    assert len(lines) == 4


def test_verdict_combined(configs, capsys):
    rc = main(["verdict", "--u", configs["u1"], "--w", configs["w1"], "--p", "2"])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["maximal"]["verdict"] == "bounded"
    assert out["hilbert"]["verdict"] == "bounded"
    assert out["hilbert"]["routes_agree"]


def test_exit_code_config_error(configs, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"domain": "half_line"}')
    assert main(["classes", "--w", str(bad)]) == EXIT_CONFIG
    missing = tmp_path / "missing.json"
    assert main(["classes", "--w", str(missing)]) == EXIT_CONFIG


def test_exit_code_precondition(configs, capsys):
    rc = main(["indices", "--u", configs["u1"], "--w", configs["w1"], "--p", "-1"])
    assert rc == EXIT_PRECONDITION


def test_seed_env_override(configs, tmp_path, monkeypatch, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    monkeypatch.setenv("LLAB_SEED", "7")
    main(["indices", "--u", configs["uabs"], "--w", configs["w1"], "--out", str(a)])
    main(["indices", "--u", configs["uabs"], "--w", configs["w1"], "--out", str(b)])
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    monkeypatch.setenv("LLAB_SEED", "definitely-not-an-int")
    assert (
        main(["indices", "--u", configs["uabs"], "--w", configs["w1"]]) == EXIT_CONFIG
    )


def test_csv_seventeen_digit_format(configs, capsys):
    rc = main(["indices", "--u", configs["u1"], "--w", configs["w1"]])
    out = capsys.readouterr().out
    body = out.splitlines()
    # every float field round-trips exactly through its printed form
    row = body[1].split(",")
    assert float(row[1]) == float(format(float(row[1]), ".17g"))
