"""Command-line interface: formats, exit codes, round trips."""

import json

import numpy as np
import pytest

from tropeig import cli
from tropeig.bounds import BoundReport


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def polyfile(tmp_path):
    path = tmp_path / "poly.json"
    path.write_text(json.dumps([2, -3, 1]))
    return str(path)


@pytest.fixture
def matrixfile(tmp_path):
    path = tmp_path / "mat.json"
    path.write_text(json.dumps([[3, 0, 0], [0, [0, 2], 0], [0, 0, 1]]))
    return str(path)


class TestTroots:
    def test_complex_quadratic(self, capsys, polyfile):
        code, out, _ = run(capsys, "troots", polyfile, "--json")
        assert code == 0
        payload = json.loads(out)
        values = [v for v, m in payload["roots"]]
        assert values == pytest.approx([3.0, 2.0 / 3.0], rel=1e-9)

    def test_maxplus_mode(self, capsys, tmp_path):
        path = tmp_path / "mp.json"
        path.write_text(json.dumps([1, 2, 0, -1]))
        code, out, _ = run(capsys, "troots", str(path), "--maxplus", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["roots"] == [[1.5, 2], [-1.0, 1]]
        assert payload["saturated"] == [0, 1, 3]

    def test_neg_inf_coefficients(self, capsys, tmp_path):
        path = tmp_path / "mp.json"
        path.write_text(json.dumps(["-inf", "-inf", 0]))
        code, out, _ = run(capsys, "troots", str(path), "--maxplus", "--json")
        assert code == 0
        assert json.loads(out)["roots"] == [["-inf", 2]]

    def test_constant_rejected(self, capsys, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("[5]")
        code, _, err = run(capsys, "troots", str(path))
        assert code == 2
        assert "degree >= 1 required" in err

    def test_hop_flag(self, capsys, polyfile):
        code, out, _ = run(capsys, "troots", polyfile, "--hop", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["hop_all_hold"]
        assert len(payload["hop"]) == 2

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "troots", "/nonexistent/poly.json")
        assert code == 2


class TestTeig:
    def test_diagonal(self, capsys, matrixfile):
        code, out, _ = run(capsys, "teig", matrixfile, "--json")
        assert code == 0
        payload = json.loads(out)
        values = [v for v, m in payload["gammas"]]
        assert values == pytest.approx([3.0, 2.0, 1.0], rel=1e-12)
        assert payload["gamma1_equals_max_cycle_mean"]

    @pytest.mark.parametrize("method", ["coeff", "eval", "both"])
    def test_methods_agree(self, capsys, matrixfile, method):
        code, out, _ = run(capsys, "teig", matrixfile, "--json",
                           "--method", method)
        assert code == 0
        payload = json.loads(out)
        assert [m for v, m in payload["gammas"]] == [1, 1, 1]
        assert [v for v, m in payload["gammas"]] == pytest.approx(
            [3.0, 2.0, 1.0], rel=1e-9)

    def test_all_ones(self, capsys, tmp_path):
        path = tmp_path / "ones.json"
        path.write_text(json.dumps([[1] * 4] * 4))
        code, out, _ = run(capsys, "teig", str(path), "--json")
        assert code == 0
        ((value, mult),) = json.loads(out)["gammas"]
        assert mult == 4 and value == pytest.approx(1.0, rel=1e-12)

    def test_csv_and_coordinate_formats(self, capsys, tmp_path):
        csvfile = tmp_path / "m.csv"
        csvfile.write_text("0,1+2i\n3,4\n")
        code, out, _ = run(capsys, "teig", str(csvfile), "--json")
        assert code == 0
        coordfile = tmp_path / "m.txt"
        coordfile.write_text("1 2 1 2\n2 1 3 0\n2 2 4 0\n")
        code2, out2, _ = run(capsys, "teig", str(coordfile), "--json")
        assert code2 == 0
        assert json.loads(out)["gammas"] == json.loads(out2)["gammas"]

    def test_duplicate_coordinate_rejected(self, capsys, tmp_path):
        path = tmp_path / "dup.txt"
        path.write_text("1 1 1 0\n1 1 2 0\n")
        code, _, err = run(capsys, "teig", str(path))
        assert code == 2
        assert "duplicate" in err


class TestBounds:
    def test_json_round_trip(self, capsys, matrixfile):
        code, out, _ = run(capsys, "bounds", matrixfile, "--json", "--lower")
        assert code == 0
        report = BoundReport.from_json(out)
        assert report.n == 3
        assert report.all_upper_hold

    def test_csv_header(self, capsys, matrixfile):
        code, out, _ = run(capsys, "bounds", matrixfile, "--csv")
        assert code == 0
        assert out.splitlines()[0].startswith("k,eig_prefix,trop_prefix")

    def test_k_range(self, capsys, matrixfile):
        code, out, _ = run(capsys, "bounds", matrixfile, "--json",
                           "--k-range", "1:2")
        assert code == 0
        assert [r["k"] for r in json.loads(out)["records"]] == [1, 2]

    def test_monomial_ratios_one(self, capsys, tmp_path):
        path = tmp_path / "mono.json"
        path.write_text(json.dumps([[0, 2, 0], [0, 0, [0, -3]], [5, 0, 0]]))
        code, out, _ = run(capsys, "bounds", str(path), "--json")
        assert code == 0
        for rec in json.loads(out)["records"]:
            assert rec["ratio"] == pytest.approx(1.0, rel=1e-9)


class TestVerify:
    def test_circulation_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "circulation",
                           "--instances", "40", "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] == 40

    def test_upper_suite_small(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "upper",
                           "--instances", "25", "--nmax", "4")
        assert code == 0
        assert "25/25 passed" in out

    def test_deterministic_for_seed(self, capsys):
        _, out1, _ = run(capsys, "verify", "--suite", "hop",
                         "--instances", "15", "--seed", "5", "--json")
        _, out2, _ = run(capsys, "verify", "--suite", "hop",
                         "--instances", "15", "--seed", "5", "--json")
        assert out1 == out2


class TestCompanionAndDecompose:
    def test_companion_table(self, capsys, polyfile):
        code, out, _ = run(capsys, "companion", polyfile, "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["all_hold"]
        assert [r["norm_constant"] for r in payload["records"]] == [2, 1]

    def test_decompose(self, capsys, tmp_path):
        path = tmp_path / "circ.json"
        path.write_text(json.dumps([[1, 1], [1, 1]]))
        code, out, _ = run(capsys, "decompose", str(path), "--json")
        assert code == 0
        payload = json.loads(out)
        assert payload["weight"] == 2
        assert len(payload["parts"]) == 2

    def test_decompose_rejects_non_circulation(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps([[0, 1], [0, 0]]))
        code, _, err = run(capsys, "decompose", str(path))
        assert code == 2


def test_global_flags_both_positions(capsys, matrixfile):
    code1, out1, _ = run(capsys, "--json", "teig", matrixfile)
    code2, out2, _ = run(capsys, "teig", matrixfile, "--json")
    assert code1 == code2 == 0
    assert out1 == out2
