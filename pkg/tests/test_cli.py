import csv
import io
import json
import subprocess
import sys

import pytest

from telegraph_max import cli
from telegraph_max.verification import checks


def run(argv):
    buf = io.StringIO()
    code = cli.main(argv, out=buf)
    return code, buf.getvalue()


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_grid_example():
    code, out = run(["eval", "--quantity", "max", "--v0", "plus", "--n", "3", "--c", "1", "--t", "1",
                     "--grid", "0:1:5"])
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 5
    at_half = [r for r in rows if r["beta"] and float(r["beta"]) == 0.5][0]
    assert float(at_half["cdf"]) == pytest.approx(0.6875, abs=1e-12)
    assert list(rows[0].keys()) == ["beta", "density", "cdf", "atom_loc", "atom_mass"]
    assert all(r["atom_loc"] == "" for r in rows)


def test_eval_atomic_law_lists_atoms():
    code, out = run(["eval", "--quantity", "max", "--v0", "minus", "--n", "0"])
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 1
    assert rows[0]["beta"] == "" and float(rows[0]["atom_loc"]) == 0.0 and float(rows[0]["atom_mass"]) == 1.0


def test_eval_density_of_atomic_law_is_usage_error(capsys):
    code, _ = run(["eval", "--quantity", "max", "--v0", "plus", "--n", "0", "--grid", "0:1:3"])
    assert code == 2
    assert "atomic" in capsys.readouterr().err


def test_eval_position_point():
    code, out = run(["eval", "--quantity", "position", "--n", "1", "--x", "0.3", "--c", "1", "--t", "1"])
    assert code == 0
    (row,) = csv_rows(out)
    assert float(row["density"]) == pytest.approx(0.5, abs=1e-12)


def test_csv_precision_is_twelve_digits():
    code, out = run(["eval", "--quantity", "max", "--v0", "plus", "--n", "2", "--beta", "0.3"])
    (row,) = csv_rows(out)
    digits = row["cdf"].replace(".", "").lstrip("0")
    assert len(digits) <= 12


def test_json_round_trip_of_parameters():
    argv = ["eval", "--quantity", "max", "--v0", "minus", "--parity", "odd", "--lambda", "2.5",
            "--c", "0.5", "--t", "3", "--grid", "0:1.5:4", "--format", "json"]
    code, out = run(argv)
    assert code == 0
    payload = json.loads(out)
    assert payload["schema_version"] == cli.SCHEMA_VERSION
    expected = {k: v for k, v in vars(cli.build_parser().parse_args(argv)).items() if k != "func"}
    assert payload["params"] == expected
    assert len(payload["rows"]) == 4
    assert payload["atoms"][0]["location"] == 0.0


def test_json_values_are_exact_floats():
    code, out = run(["eval", "--quantity", "max", "--v0", "plus", "--n", "3", "--beta", "0.5", "--format", "json"])
    assert json.loads(out)["rows"][0]["cdf"] == 0.6875


def test_moments_examples():
    code, out = run(["moments", "--v0", "plus", "--n", "1,3,5", "--m", "1", "--c", "1", "--t", "1"])
    assert code == 0
    assert [float(r["moment"]) for r in csv_rows(out)] == pytest.approx([0.5, 0.375, 0.3125], rel=1e-12)
    code, out = run(["moments", "--v0", "plus", "--n", "1", "--m", "2"])
    assert float(csv_rows(out)[0]["moment"]) == pytest.approx(1 / 3, rel=1e-12)
    code, out = run(["moments", "--v0", "minus", "--n", "4", "--m", "1"])
    assert float(csv_rows(out)[0]["moment"]) == pytest.approx(0.175, rel=1e-12)


def test_unconditional_moments_methods():
    code, out = run(["moments", "--v0", "minus", "--m", "1,2", "--format", "json"])
    rows = json.loads(out)["rows"]
    assert [r["method"] for r in rows] == ["quadrature", "quadrature"]
    code, out = run(["moments", "--v0", "plus", "--m", "1", "--format", "json"])
    assert json.loads(out)["rows"][0]["method"] == "closed_form"


def test_simulate_is_deterministic_and_unconditional_by_default():
    argv = ["simulate", "--quantity", "max", "--v0", "minus", "--samples", "20000", "--seed", "7"]
    code1, out1 = run(argv)
    code2, out2 = run(argv)
    assert code1 == code2 == 0
    assert out1 == out2
    summary = json.loads(out1)["summary"]
    assert summary["regime"]["n"] is None


def test_simulate_atom_example():
    code, out = run(["simulate", "--quantity", "max", "--v0", "minus", "--n", "2", "--samples", "1000000",
                     "--seed", "7", "--workers", "2"])
    atom = json.loads(out)["summary"]["atom_freqs"][0]
    assert abs(atom["empirical"] - 0.5) <= 0.0015


def test_simulate_requires_seed():
    code, _ = run(["simulate", "--v0", "plus", "--n", "2"])
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["eval", "--v0", "plus", "--n", "2", "--grid", "0:1"],
    ["eval", "--v0", "plus", "--n", "2", "--grid", "1:0:3"],
    ["eval", "--v0", "plus", "--n", "2", "--lambda", "-1", "--beta", "0.5"],
    ["eval", "--quantity", "max", "--n", "2", "--beta", "0.5"],
    ["eval", "--v0", "plus", "--n", "2", "--parity", "odd"],
    ["moments", "--v0", "plus", "--n", "1", "--m", "0"],
    ["verify", "--suite", "bogus"],
    ["frobnicate"],
])
def test_usage_errors(argv):
    assert run(argv)[0] == 2


def test_verify_recurrence_example():
    code, out = run(["verify", "--suite", "recurrence", "--n", "3", "--beta", "0.5"])
    assert code == 0
    assert "[PASS]" in out and "n=3" in out


def test_verify_kac_json():
    code, out = run(["verify", "--suite", "kac", "--format", "json"])
    payload = json.loads(out)
    assert code == 0 and payload["passed"]
    assert all(r["suite"] == "kac" for r in payload["rows"])


def test_verify_reports_failure(monkeypatch):
    monkeypatch.setattr(checks, "run_suite", lambda name, **kw: [checks.CheckResult("forced", 1.0, 0.5, False)])
    code, out = run(["verify", "--suite", "identities"])
    assert code == 1
    assert "[FAIL] forced" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "telegraph_max", "eval", "--v0", "minus", "--n", "2",
                           "--beta", "0.5"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    point, atom = csv_rows(proc.stdout)
    assert float(point["cdf"]) == pytest.approx(0.875, abs=1e-12)
    assert float(atom["atom_mass"]) == pytest.approx(0.5, abs=1e-15)
