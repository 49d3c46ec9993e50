import csv
import json
import subprocess
import sys

import pytest

from qchkahler.cli import main, render_csv


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestVerify:
    def test_flat(self, tmp_path, capsys):
        path = tmp_path / "r.json"
        code, out, _ = run(["verify", "--family", "flat", "--n", "3", "--json", str(path)], capsys)
        assert code == 0
        doc = json.loads(path.read_text(encoding="utf-8"))
        assert list(doc) == ["config", "checks", "summary"]
        assert doc["summary"]["verdict"] == "pass"
        for chk in doc["checks"]:
            assert set(chk) >= {"name", "paper_ref", "points", "residuals", "tolerance", "verdict"}
            assert max(chk["residuals"]) < 1e-8
        assert "kahler_symmetries" in out

    def test_potential_log1p(self, capsys):
        code, _, _ = run(["verify", "--family", "potential", "--f", "log1p", "--n", "3", "--seed", "7"], capsys)
        assert code == 0

    def test_rotational_coefficients_table(self, tmp_path, capsys):
        path = tmp_path / "r.json"
        code, _, _ = run(["verify", "--family", "rotational", "--profile", "sin", "--check", "coefficients",
                          "--json", str(path)], capsys)
        assert code == 0
        (chk,) = json.loads(path.read_text())["checks"]
        assert chk["name"] == "coefficients"
        assert {"a", "b", "c", "a_closed", "b_closed", "c_closed"} <= set(chk["values"][0])

    def test_deterministic_json(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert run(["verify", "--family", "normal-form", "--seed", "5", "--points", "2", "--json", str(p)],
                       capsys)[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_failing_check_exit_1(self, capsys):
        code, out, _ = run(["verify", "--family", "potential", "--f", "quadratic", "--check", "qch",
                            "--tol", "qch=1e-30", "--points", "2"], capsys)
        assert code == 1
        assert "fail" in out

    def test_coefficients_needs_rotational(self, capsys):
        code, _, err = run(["verify", "--family", "flat", "--check", "coefficients"], capsys)
        assert code == 2 and "rotational" in err

    def test_bad_tolerance_key(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--tol", "foo=1"])
        assert exc.value.code == 2

    def test_polynomial_without_coeffs(self, capsys):
        assert run(["verify", "--family", "potential", "--f", "polynomial"], capsys)[0] == 2

    def test_domain_error_exit_3(self, capsys):
        code, _, err = run(["verify", "--family", "potential", "--f", "polynomial", "--coeffs", "0", "1", "-0.1"],
                           capsys)
        assert code == 3 and "not positive" in err

    def test_csv_output(self, tmp_path, capsys):
        path = tmp_path / "r.csv"
        assert run(["verify", "--family", "flat", "--check", "b0", "--points", "2", "--csv", str(path)],
                   capsys)[0] == 0
        rows = list(csv.DictReader(path.open()))
        assert len(rows) == 2 and rows[0]["check"] == "b0_distribution"


class TestOtherCommands:
    def test_decompose(self, tmp_path, capsys):
        path = tmp_path / "d.csv"
        code, out, _ = run(["decompose", "--family", "potential", "--points", "2", "--csv", str(path)], capsys)
        assert code == 0
        rows = list(csv.DictReader(path.open()))
        assert float(rows[0]["a"]) == pytest.approx(2.0)
        assert rows[0]["class"] == "Positive"

    def test_transform_flat(self, tmp_path, capsys):
        path = tmp_path / "t.json"
        code, _, _ = run(["transform", "--family", "flat", "--v", "log1p-r2", "--points", "2",
                          "--json", str(path)], capsys)
        assert code == 0
        doc = json.loads(path.read_text())
        qc, comp = doc["checks"]
        assert max(v["cor_gap"] for v in qc["values"]) < 1e-5
        assert {"k", "k_prime", "a_plus_k2", "a_plus_k2_prime"} <= set(qc["values"][0])
        assert comp["residuals"][0] < 1e-8

    def test_transform_zero_v(self, capsys):
        code, _, err = run(["transform", "--family", "flat", "--v", "zero"], capsys)
        assert code == 3 and "dv must be nonzero" in err

    def test_flatten_flat(self, capsys):
        code, _, err = run(["flatten", "--family", "flat"], capsys)
        assert code == 3 and "already flat" in err

    def test_flatten_potential(self, capsys):
        assert run(["flatten", "--family", "potential", "--points", "3"], capsys)[0] == 0

    def test_meridian_csv(self, tmp_path, capsys):
        path = tmp_path / "m.csv"
        code, out, _ = run(["meridian", "--a", "1", "--samples", "100", "--csv", str(path)], capsys)
        assert code == 0
        lines = path.read_text().splitlines()
        assert lines[0] == "x,y,b" and len(lines) == 101
        assert "0 < x < 2" in out

    def test_meridian_domain(self, tmp_path, capsys):
        code, out, _ = run(["meridian", "--a", "4", "--samples", "5", "--csv", str(tmp_path / "m.csv")], capsys)
        assert code == 0 and "0 < x < 1" in out

    def test_meridian_stdout(self, capsys):
        code, out, _ = run(["meridian", "--a", "2", "--samples", "3"], capsys)
        assert code == 0 and out.splitlines()[0] == "x,y,b" and len(out.splitlines()) == 4

    def test_meridian_negative_a(self, capsys):
        assert run(["meridian", "--a", "-1"], capsys)[0] == 3

    def test_unwritable(self, tmp_path, capsys):
        bad = tmp_path / "missing" / "m.csv"
        code, _, err = run(["meridian", "--a", "1", "--csv", str(bad)], capsys)
        assert code == 4 and "cannot write" in err

    def test_rotational(self, tmp_path, capsys):
        path = tmp_path / "r.json"
        code, _, _ = run(["rotational", "--profile", "ramp", "--points", "3", "--json", str(path)], capsys)
        assert code == 0
        names = [c["name"] for c in json.loads(path.read_text())["checks"]]
        assert names == ["coefficients", "warped_curvature", "nabla_J"]


def test_csv_uses_15_significant_digits():
    text = render_csv([{"x": 1 / 3, "name": "a"}])
    assert text.splitlines() == ["x,name", "0.333333333333333,a"]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qchkahler", "verify", "--family", "flat", "--check", "qch",
                           "--points", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "qch_decomposition" in proc.stdout
