import json
from dataclasses import replace
from fractions import Fraction

import pytest

import quadmps.cli as cli
from quadmps.decomposition import QdComponents
from quadmps.sequences import BandedRule

F = Fraction

MAIN_FLAGS = [
    "--beta", "1", "--alpha1", "2", "--alpha2", "3", "--gamma", "1",
    "--p", "0", "--q", "0", "--a", "0",
]


def run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestDecompose:
    def test_family_json(self, capsys):
        code, out, _ = run(
            capsys, ["decompose", "--family", "main", *MAIN_FLAGS, "--nmax", "6"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["nmax"] == 6
        record1 = payload["components"][1]
        assert record1["P"] == ["-3", "1"]
        assert record1["R"] == ["-6", "1"]
        assert record1["a_prev"] == []  # null component: the zero polynomial
        assert payload["components"][0]["b"] == ["1"]
        components = QdComponents.from_json(payload)
        assert components.to_json() == payload

    def test_sc_file_matches_family(self, capsys, tmp_path):
        code, family_out, _ = run(
            capsys, ["decompose", "--family", "main", *MAIN_FLAGS, "--nmax", "5"]
        )
        assert code == 0
        rule = BandedRule.two_orthogonal(
            beta=lambda n: F(1) if n % 2 else F(-1),
            alpha=lambda m: F(2) if m % 2 else F(3),
            gamma=lambda m: F(-1) if m % 2 else F(1),
        )
        path = tmp_path / "table.json"
        path.write_text(json.dumps(rule.table(10).to_json()))
        code, file_out, _ = run(
            capsys,
            [
                "decompose", "--sc-file", str(path),
                "--p", "0", "--q", "0", "--a", "0", "--nmax", "5",
            ],
        )
        assert code == 0
        assert file_out == family_out

    def test_input_source_is_exclusive(self, capsys, tmp_path):
        code, _, err = run(capsys, ["decompose", *MAIN_FLAGS, "--nmax", "5"])
        assert code == 2
        assert "exactly one" in err

    def test_missing_param_flag(self, capsys):
        code, _, err = run(
            capsys, ["decompose", "--family", "main", *MAIN_FLAGS[2:]]
        )
        assert code == 2
        assert "--beta" in err

    def test_family_flag_mismatches(self, capsys):
        code, _, err = run(
            capsys,
            ["decompose", "--family", "main", *MAIN_FLAGS, "--tau", "1"],
        )
        assert code == 4
        assert "takes no --tau" in err
        code, _, err = run(
            capsys, ["decompose", "--family", "corecursive", *MAIN_FLAGS]
        )
        assert code == 4
        assert "requires --tau" in err

    def test_unreadable_sc_file(self, capsys, tmp_path):
        code, _, err = run(
            capsys,
            ["decompose", "--sc-file", str(tmp_path / "absent.json"),
             "--p", "0", "--q", "0", "--a", "0"],
        )
        assert code == 2


class TestAnalyzeAndDerive:
    def test_analyze_family(self, capsys):
        code, out, _ = run(
            capsys,
            ["analyze", "--family", "main", *MAIN_FLAGS, "--nmax", "8",
             "--dmax", "4"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["detected_d"] == 2
        assert payload["witnesses"][0]["d"] == 1

    def test_analyze_sc_file_needs_no_map(self, capsys, tmp_path):
        rule = BandedRule.three_term(
            beta=lambda n: F(0), gamma=lambda n: F(n, 2)
        )
        path = tmp_path / "hermite.json"
        path.write_text(json.dumps(rule.table(10).to_json()))
        code, out, _ = run(
            capsys, ["analyze", "--sc-file", str(path), "--dmax", "4"]
        )
        assert code == 0
        assert json.loads(out)["detected_d"] == 1

    def test_derive_constant_rule_is_classical(self, capsys, tmp_path):
        rule = BandedRule.two_orthogonal(
            beta=lambda n: F(0), alpha=lambda m: F(3), gamma=lambda m: F(2)
        )
        path = tmp_path / "constants.json"
        path.write_text(json.dumps(rule.table(12).to_json()))
        code, out, _ = run(
            capsys, ["derive", "--sc-file", str(path), "--nmax", "6"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["classical"] is True
        assert payload["base"]["detected_d"] == 2
        assert payload["derivative"]["detected_d"] == 2

    def test_derive_main_family_is_not_classical(self, capsys):
        code, out, _ = run(
            capsys, ["derive", "--family", "main", *MAIN_FLAGS, "--nmax", "6"]
        )
        assert code == 0
        assert json.loads(out)["classical"] is False


class TestVerifyCase:
    def test_explicit_tuple_passes(self, capsys):
        code, out, _ = run(
            capsys,
            ["verify-case", "--case", "I", *MAIN_FLAGS, "--nmax", "8",
             "--dmax", "6"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["case"] == "I"

    def test_sampled_run_passes(self, capsys):
        code, out, _ = run(
            capsys,
            ["verify-case", "--case", "II", "--samples", "2", "--seed", "7",
             "--nmax", "8", "--dmax", "6"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["passes"] == 2

    def test_case_mismatch_exits_four(self, capsys):
        flags = [
            "--beta", "1", "--alpha1", "2", "--alpha2", "3", "--gamma", "1",
            "--p", "-1", "--q", "0", "--a", "0",  # p = -beta - a
        ]
        code, _, err = run(
            capsys, ["verify-case", "--case", "I", *flags, "--nmax", "8"]
        )
        assert code == 4
        assert "p = -beta - a" in err

    def test_malformed_rational_exits_two(self, capsys):
        code, _, _ = run(
            capsys,
            ["verify-case", "--case", "I", "--beta", "3/0", *MAIN_FLAGS[2:]],
        )
        assert code == 2

    def test_small_nmax_exits_three(self, capsys):
        code, _, err = run(
            capsys,
            ["verify-case", "--case", "I", *MAIN_FLAGS, "--nmax", "3"],
        )
        assert code == 3

    def test_failed_verdict_exits_one(self, capsys, monkeypatch):
        real = cli.verify_case

        def failing(case_id, params, nmax, dmax):
            verdict = real(case_id, params, nmax=nmax, dmax=dmax)
            return replace(verdict, passed=False)

        monkeypatch.setattr(cli, "verify_case", failing)
        code, out, _ = run(
            capsys,
            ["verify-case", "--case", "I", *MAIN_FLAGS, "--nmax", "8",
             "--dmax", "6"],
        )
        assert code == 1
        assert json.loads(out)["passed"] is False

    def test_seed_env_variable(self, capsys, monkeypatch):
        argv = ["verify-case", "--case", "I", "--samples", "1", "--nmax", "8",
                "--dmax", "6"]
        monkeypatch.setenv("QUADMPS_SEED", "7")
        code, env_out, _ = run(capsys, argv)
        assert code == 0
        monkeypatch.delenv("QUADMPS_SEED")
        code, flag_out, _ = run(capsys, argv + ["--seed", "7"])
        assert code == 0
        assert env_out == flag_out

    def test_malformed_seed_env_exits_two(self, capsys, monkeypatch):
        monkeypatch.setenv("QUADMPS_SEED", "not-a-seed")
        code, _, err = run(
            capsys,
            ["verify-case", "--case", "I", "--samples", "1", "--nmax", "8"],
        )
        assert code == 2
        assert "QUADMPS_SEED" in err


class TestSweep:
    def test_single_case_sweep(self, capsys):
        code, out, _ = run(
            capsys,
            ["sweep", "--case", "I", "--samples", "2", "--seed", "5",
             "--nmax", "8", "--dmax", "6"],
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["passed"] is True
        assert payload["cases"]["I"]["passes"] == 2
        assert payload["cases"]["I"]["exceptional"] == []

    def test_unknown_case_exits_four(self, capsys):
        code, _, err = run(capsys, ["sweep", "--case", "case-X"])
        assert code == 4
        assert "unknown case" in err

    def test_runs_are_deterministic(self, capsys):
        argv = ["sweep", "--case", "II-alpha2zero", "--samples", "2",
                "--seed", "9", "--nmax", "8", "--dmax", "6"]
        code, first, _ = run(capsys, argv)
        assert code == 0
        code, second, _ = run(capsys, argv)
        assert code == 0
        assert first == second


class TestOutputModes:
    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        argv = ["decompose", "--family", "main", *MAIN_FLAGS, "--nmax", "5"]
        code, direct, _ = run(capsys, argv)
        assert code == 0
        code, silent, _ = run(capsys, argv + ["--output", str(target)])
        assert code == 0
        assert silent == ""
        assert target.read_text() == direct

    def test_decompose_table_format(self, capsys):
        code, out, _ = run(
            capsys,
            ["decompose", "--family", "main", *MAIN_FLAGS, "--nmax", "4",
             "--format", "table"],
        )
        assert code == 0
        assert "P      = x - 3" in out
        assert "R      = x - 6" in out
        assert "anchor a = 0" in out

    def test_verify_table_format(self, capsys):
        code, out, _ = run(
            capsys,
            ["verify-case", "--case", "I", *MAIN_FLAGS, "--nmax", "8",
             "--dmax", "6", "--format", "table"],
        )
        assert code == 0
        assert "case I: PASS" in out

    def test_help_exits_zero(self, capsys):
        assert cli.main(["--help"]) == 0
        assert cli.main(["decompose", "--bogus"]) == 2
