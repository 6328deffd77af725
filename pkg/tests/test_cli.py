import csv
import io
import json
import subprocess
import sys

import pytest

from zetanorm import cli
from zetanorm.cli import EXIT_ARGS, EXIT_FAIL, EXIT_NUMERIC, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coeffs_table(capsys):
    code, out, _ = run(capsys, "coeffs", "--max-order", "6")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "I0 = 3/4 ≈ 0.75"
    assert "I6 = 83/256*z6 - 1/16*z3^2 ≈ 0.239533" in lines
    assert "I2 = 1/8*z2 ≈ 0.205617" in lines


def test_coeffs_annotations(capsys):
    code, out, _ = run(capsys, "coeffs", "--max-order", "14", "--format", "json", "--no-timestamp")
    assert code == EXIT_OK
    rows = {r["p"]: r for r in json.loads(out)["results"]}
    assert rows[12]["exact_form"].startswith("-2095281645/11321344*z12")
    assert rows[13]["beyond_printed_table"] and rows[14]["beyond_printed_table"]
    assert "beyond_printed_table" not in rows[12]
    assert rows[10]["printed_table_differs"] == [{"monomial": [3, 7], "printed": "-87/32", "computed": "-9/8"}]
    assert rows[11]["printed_table_differs"][0]["computed"] == "297/16"


def test_coeffs_both_bases(capsys):
    code, out, _ = run(capsys, "coeffs", "--max-order", "3", "--basis", "both", "--format", "json", "--no-timestamp")
    rows = [r for r in json.loads(out)["results"] if r["p"] == 3]
    assert [r["basis"] for r in rows] == ["poly", "alt"]
    assert abs(float(rows[0]["decimal"]) - float(rows[1]["decimal"])) < 1e-9


def test_json_byte_identical(capsys):
    argv = ("eval", "--n", "10", "20", "--format", "json", "--no-timestamp")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b
    doc = json.loads(a)
    assert set(doc) == {"command", "params", "results", "checks", "meta"}
    assert doc["params"]["n"] == [10, 20]
    assert "timestamp" not in doc["meta"] and doc["meta"]["seed"] == cli.DEFAULT_SEED


def test_json_timestamp_present(capsys):
    _, out, _ = run(capsys, "coeffs", "--max-order", "2", "--format", "json")
    meta = json.loads(out)["meta"]
    assert "timestamp" in meta and "wall_time_s" in meta


def test_mc_json_reproducible(capsys):
    argv = ("norms", "--r", "3", "--samples", "20000", "--format", "json", "--no-timestamp")
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--workers", "2")
    ra, rb = json.loads(a)["results"], json.loads(b)["results"]
    assert ra == rb
    _, c, _ = run(capsys, *argv, "--seed", "1")
    assert json.loads(c)["results"] != ra


def test_csv_columns(capsys):
    _, out, _ = run(capsys, "coeffs", "--max-order", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["p", "exact_form", "decimal"]
    assert [r["p"] for r in rows] == ["0", "1", "2", "3", "4"]
    _, out, _ = run(capsys, "cdf", "--n", "16", "32", "--format", "csv")
    assert out.splitlines()[0] == "n,sup_distance,argmax,sup_times_n,max_signed"


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "moments", "--s", "2", "--max-order", "4", "--format", "json", "--out", str(target))
    assert code == EXIT_OK and out == ""
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert doc["command"] == "moments" and len(doc["results"]) == 5


def test_moments_compare(capsys):
    code, out, _ = run(capsys, "moments", "--s", "2", "--compare", "--n", "40", "--format", "json", "--no-timestamp")
    assert code == EXIT_OK
    row = [r for r in json.loads(out)["results"] if "n" in r][0]
    assert float(row["abs_error"]) < 10 / 40**7


def test_moments_fractional_uses_real_route(capsys):
    code, out, _ = run(capsys, "moments", "--s", "1/2", "--format", "json", "--no-timestamp")
    assert code == EXIT_OK
    assert json.loads(out)["params"]["real"] is True


def test_norms_r2_check(capsys):
    code, out, _ = run(capsys, "norms", "--r", "2", "--s", "2", "--samples", "20000", "--format", "json", "--no-timestamp")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["checks"][0]["name"] == "mc_vs_quadrature_4se" and doc["checks"][0]["passed"]


def test_cdf_checks(capsys):
    code, out, _ = run(capsys, "cdf", "--cross", "--format", "json", "--no-timestamp")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert {c["name"] for c in doc["checks"]} >= {"Fn_le_Finf_n16", "rate_band_n32", "rate_band_n64"}
    assert all("cross_moment" in r for r in doc["results"])


def test_verify_exact_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "exact")
    assert code == EXIT_OK
    assert out.splitlines()[-1].endswith("checks passed")


def test_exit_1_on_failed_check(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "numeric", "--tol", "1e-30")
    assert code == EXIT_FAIL
    assert "FAIL" in out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["coeffs", "--max-order", "17"],
        ["coeffs", "--digits", "5"],
        ["coeffs", "--format", "xml"],
        ["eval", "--n", "1"],
        ["eval", "--n", "nan"],
        ["moments", "--s", "-1"],
        ["moments", "--s", "abc"],
        ["norms", "--r", "1"],
        ["norms", "--samples", "10"],
        ["cdf", "--grid", "10"],
        ["verify", "--tol", "0"],
        ["verify", "--seed", "-3"],
        ["verify", "--suite", "none"],
    ],
)
def test_exit_2_on_bad_arguments(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_ARGS
    assert err


def test_exit_3_beyond_precision_ceiling(capsys):
    code, _, err = run(capsys, "coeffs", "--digits", "600")
    assert code == EXIT_NUMERIC
    assert "no convergence" in err


def test_backend_flag(capsys):
    from zetanorm import kernels

    before = kernels.backend()
    try:
        _, out, _ = run(capsys, "coeffs", "--max-order", "2", "--backend", "python", "--format", "json", "--no-timestamp")
        assert json.loads(out)["meta"]["backend"] == "python"
    finally:
        kernels.use_backend(before)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zetanorm", "coeffs", "--max-order", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("I0 = 3/4")
    proc = subprocess.run([sys.executable, "-m", "zetanorm"], capture_output=True, text=True)
    assert proc.returncode == 2
