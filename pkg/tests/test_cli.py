"""End-to-end tests for the command-line front end."""

import json
import math

import numpy as np
import pytest

import cli
from services.matrix_io import write_matrices


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def write(tmp_path):
    def _write(name, *mats):
        path = tmp_path / name
        write_matrices([np.asarray(m, dtype=float) for m in mats], str(path))
        return str(path)
    return _write


class TestWilliamsonCommand:

    def test_identity(self, capsys, write):
        code, report = _run(capsys, "williamson", "--input", write("i.csv", np.eye(2)))
        assert code == 0
        assert report["status"] == "completed"
        assert report["result"]["spectra"] == [[pytest.approx(1.0)]]
        assert report["residuals"]["symplectic"] <= 1e-12
        assert report["residuals"]["diagonalization"] <= 1e-12
        assert report["tolerances"]["tol_residual"] == 1e-8

    def test_csv_json_parity(self, capsys, write):
        A = [[2.0, 0.1], [0.1, 1.3]]
        _, from_csv = _run(capsys, "williamson", "--input", write("a.csv", A))
        _, from_json = _run(capsys, "williamson", "--input", write("a.json", A))
        assert from_csv["result"] == from_json["result"]

    def test_not_positive_definite(self, capsys, write):
        code, report = _run(capsys, "williamson", "--input", write("a.csv", np.diag([1.0, 0.0])))
        assert code == 2
        assert report["status"] == "rejected"
        assert report["error"]["violated_hypothesis"] == "positive definiteness"

    def test_symplectic_eigs(self, capsys, write):
        code, report = _run(capsys, "symplectic-eigs", "--input", write("a.csv", np.diag([2.0, 8.0])))
        assert code == 0
        assert report["result"]["spectra"] == [[pytest.approx(4.0)]]


class TestCommuteCommands:

    def test_commuting_4x4_pair(self, capsys, write, pair_4x4):
        A, B = pair_4x4
        code, report = _run(capsys, "check-commute", "--input", write("a.csv", A), "--input", write("b.csv", B))
        assert code == 0
        assert report["result"]["commutes"] is True

    def test_commuting_pair_powers(self, capsys, write, pair_4x4):
        code, report = _run(capsys, "check-commute", "--input", write("ab.json", *pair_4x4), "--power", "2")
        assert code == 0
        powers = report["result"]["powers"]
        assert powers["holds"] is False
        assert powers["residual"] > 0.1
        assert powers["hypotheses"]["classical_commute"] is False

    def test_false_is_not_an_error(self, capsys, write):
        code, report = _run(capsys, "check-commute", "--input", write("ab.json", np.diag([4.0, 1.0]), np.eye(2)))
        assert code == 0
        assert report["result"]["commutes"] is False

    def test_bracket(self, capsys, write, rank_one_forms):
        code, report = _run(capsys, "bracket", "--input", write("qr.json", *rank_one_forms))
        assert code == 0
        assert report["result"]["bracket_gram"] == [[0.0, 2.0], [2.0, 0.0]]
        assert report["result"]["vanishes"] is False

    def test_wrong_operand_count(self, capsys, write):
        code, report = _run(capsys, "check-commute", "--input", write("a.csv", np.eye(2)))
        assert code == 1
        assert report["status"] == "failed"


class TestSimDiagCommand:

    def test_not_commuting(self, capsys, write):
        code, report = _run(capsys, "simdiag", "--input", write("ab.json", np.diag([4.0, 1.0]), np.eye(2)))
        assert code == 2
        assert report["error"]["violated_hypothesis"] == "symplectic commutation"
        assert report["error"]["residual"] > 0.1

    def test_commuting_4x4_pair(self, capsys, write, pair_4x4):
        code, report = _run(capsys, "simdiag", "--input", write("ab.json", *pair_4x4))
        assert code == 0
        assert len(report["result"]["spectra"]) == 2
        assert max(report["residuals"].values()) <= 1e-8

    @pytest.mark.parametrize("seed", range(50))
    def test_gen_round_trip(self, capsys, tmp_path, seed):
        family = str(tmp_path / "family.json")
        code, _ = _run(capsys, "gen", "--seed", str(seed), "--n", "2",
                       "--spectrum", "1,2", "--spectrum", "3,5", "--out", family)
        assert code == 0
        code, report = _run(capsys, "simdiag", "--input", family)
        assert code == 0
        assert max(report["residuals"].values()) <= report["tolerances"]["tol_residual"]
        assert report["result"]["spectra"][0] == pytest.approx([1.0, 2.0], rel=1e-8)


class TestNormalFormCommand:

    def test_kernel_not_symplectic(self, capsys, write, rank_one_forms):
        code, report = _run(capsys, "normal-form", "--input", write("q.csv", rank_one_forms[0]))
        assert code == 2
        assert report["error"]["violated_hypothesis"] == "symplectic kernel"

    def test_psd_family(self, capsys, tmp_path):
        family = str(tmp_path / "family.json")
        _run(capsys, "gen", "--seed", "3", "--spectrum", "1,0,3", "--spectrum", "2,0,0", "--out", family)
        code, report = _run(capsys, "normal-form", "--input", family)
        assert code == 0
        assert report["result"]["k"] == 2
        assert report["result"]["kernel_dim"] == 2
        assert "hamilton_action[1]" in report["residuals"]


class TestApplicationCommands:

    def test_partition_single_oscillator(self, capsys, write):
        code, report = _run(capsys, "partition", "--input", write("m.csv", np.eye(2)))
        assert code == 0
        assert report["result"]["Z"] == pytest.approx(2.0 * math.pi)
        assert report["result"]["logZ_pi_convention"] == pytest.approx(math.log(math.pi))
        assert any("deviation" in w for w in report["warnings"])

    def test_partition_dimension_inferred(self, capsys, tmp_path):
        family = str(tmp_path / "family.json")
        _run(capsys, "gen", "--seed", "1", "--spectrum", "1,2", "--spectrum", "0.5,3", "--out", family)
        code, report = _run(capsys, "partition", "--input", family, "--beta", "2")
        assert code == 0
        assert report["result"]["params"] == {"beta": 2.0, "h": 1.0, "d": 1, "N": 2}
        assert report["result"]["modeSums"] == pytest.approx([1.5, 5.0], rel=1e-8)

    @pytest.mark.parametrize("flag", ["--N", "--d"])
    def test_partition_zero_count_rejected(self, capsys, write, flag):
        code, report = _run(capsys, "partition", "--input", write("m.csv", np.eye(2)), flag, "0")
        assert code == 1
        assert report["status"] == "failed"
        assert report["error"]["type"] == "InvalidInputError"

    def test_gaussian_modes(self, capsys, write):
        code, report = _run(capsys, "gaussian-modes", "--input", write("v.json", np.eye(2), 3.0 * np.eye(2)))
        assert code == 0
        assert report["result"]["spectra"] == [[pytest.approx(1.0)], [pytest.approx(3.0)]]


class TestGenCommand:

    @pytest.mark.parametrize("kind", ["symplectic", "orthosymplectic"])
    def test_group_elements(self, capsys, kind):
        code, report = _run(capsys, "gen", "--kind", kind, "--n", "3", "--seed", "5")
        assert code == 0
        assert report["result"]["matrices"][0]["dim"] == 6
        assert report["residuals"]["symplectic"] <= 1e-10

    def test_deterministic(self, capsys):
        _, first = _run(capsys, "gen", "--seed", "9", "--spectrum", "1,2")
        _, second = _run(capsys, "gen", "--seed", "9", "--spectrum", "1,2")
        assert first["result"] == second["result"]

    def test_spectrum_length_mismatch(self, capsys):
        code, report = _run(capsys, "gen", "--n", "3", "--spectrum", "1,2")
        assert code == 1
        assert report["error"]["type"] == "InvalidInputError"


    def test_zero_modes_rejected(self, capsys):
        code, report = _run(capsys, "gen", "--n", "0", "--spectrum", "1,2")
        assert code == 1
        assert report["error"]["type"] == "InvalidInputError"


class TestUsage:

    def test_unknown_subcommand(self, capsys):
        assert cli.main(["factorize"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_missing_subcommand(self, capsys):
        assert cli.main([]) == 1

    def test_bad_spectrum_flag(self, capsys):
        assert cli.main(["gen", "--spectrum", "1,a"]) == 1

    def test_missing_file(self, capsys, tmp_path):
        code, report = _run(capsys, "williamson", "--input", str(tmp_path / "nope.csv"))
        assert code == 1
        assert report["error"]["type"] == "MatrixFileError"

    def test_invalid_tolerance(self, capsys, write):
        code, report = _run(capsys, "williamson", "--input", write("i.csv", np.eye(2)), "--tol-pd", "2")
        assert code == 1
        assert report["status"] == "failed"

    def test_out_matches_stdout(self, capsys, write, tmp_path):
        out = tmp_path / "report.json"
        code, report = _run(capsys, "williamson", "--input", write("i.csv", np.eye(2)), "--out", str(out))
        assert code == 0
        assert json.loads(out.read_text()) == report
