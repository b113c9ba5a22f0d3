"""Command line client: exit codes, rendering, JSON round-trips."""

import json
from fractions import Fraction

import pytest

from kwq import cli, decomposition
from kwq.series import qs_first_mismatch
from kwq.service.schemas import SeriesModel


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["dcoeffs"])  # missing -m
    assert exc.value.code == 2
    capsys.readouterr()


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_server_side_validation_exits_2(capsys):
    # valid argparse input, rejected by the service (odd m)
    code, out, err = run(["dcoeffs", "--m", "3", "--order", "6"], capsys)
    assert code == 2
    assert err.strip()


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--version"])
    assert exc.value.code == 0
    out, _ = capsys.readouterr()
    assert "kwq" in out


def test_dcoeffs_human(capsys):
    code, out, _ = run(["dcoeffs", "--m", "2", "--order", "5"], capsys)
    assert code == 0
    assert "D0" in out and "D2" in out
    assert "-4" in out


def test_dcoeffs_json_round_trip(capsys):
    code, out, _ = run(["dcoeffs", "--m", "2", "--order", "8", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "dcoeffs"
    series = {r["name"]: r["series"] for r in doc["results"]}
    got = SeriesModel(**series["D2"]).to_qseries()
    want = decomposition.extract_D(2, 8).D[1]
    assert qs_first_mismatch(got, want) is None


def test_character_json_round_trip(capsys):
    code, out, _ = run(["character", "--m", "2", "--r", "2", "--order", "9",
                        "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    got = SeriesModel(**doc["results"][0]["series"]).to_qseries()
    want = decomposition.chF(2, 2, 9).series
    assert qs_first_mismatch(got, want) is None


def test_oracle_verify_exit_codes(capsys):
    code, out, _ = run(["oracle-verify", "--m", "2", "--rmax", "2",
                        "--order", "10"], capsys)
    assert code == 0
    assert "checks passed" in out


def test_euler_human(capsys):
    code, out, _ = run(["euler", "--kmax", "2", "--mmax", "3",
                        "--prec", "20"], capsys)
    assert code == 0
    assert "E[0,3]" in out
    assert "1/2" in out


def test_asympt_json(capsys):
    code, out, _ = run(["asympt", "--m", "2", "--r", "1", "--t", "1/10",
                        "--N", "4", "--prec", "30", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    values = {r["name"]: r["value"] for r in doc["results"]}
    assert float(values["defect"]) < 1e-4


def test_theta_identities_ok(capsys):
    code, out, _ = run(["theta-identities", "--order", "31"], capsys)
    assert code == 0


def test_transform_check_explicit(capsys):
    code, out, _ = run(["transform-check", "--m", "2", "--gamma", "1,0,2,1",
                        "--tau", "0.23,0.81", "--z", "0.21,0.11",
                        "--prec", "40"], capsys)
    assert code == 0
    assert "negative control" in out


def test_verify_all_fast(capsys):
    code, out, _ = run(["verify-all", "--fast", "--seed", "3"], capsys)
    assert code == 0
    assert "overall:" in out
    assert "FAIL" not in out.replace("PASS", "")


def test_precision_env_override(capsys, monkeypatch):
    monkeypatch.setenv("KWQ_PRECISION", "35")
    code, out, _ = run(["asympt", "--m", "2", "--r", "1", "--t", "1/10",
                        "--N", "2", "--json"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["parameters"]["prec"] == 35


def test_render_series_edges():
    assert cli.render_series(
        {"exp_denom": 1, "trunc": 4, "terms": []}) == "0  (trusted below 4)"
    text = cli.render_series(
        {"exp_denom": 2, "trunc": 9,
         "terms": [[0, "1"], [1, "-1"], [2, "3"], [3, "-5/2"]]})
    assert text.startswith("1 - q^(1/2) + 3*q - 5/2*q^(3/2)")
    assert "trusted below q^(9/2)" in text
    many = cli.render_series(
        {"exp_denom": 1, "trunc": 40,
         "terms": [[n, "1"] for n in range(20)]}, max_terms=5)
    assert "(15 more terms)" in many
