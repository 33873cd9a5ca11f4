"""Exit codes, output contracts and file plumbing of the command line."""

import json

import pytest

from zpzp2.cli import main
from zpzp2.code import load_code
from zpzp2.construct import load_plan


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGray:
    def test_pinned_image(self, capsys):
        code, out, _ = run(capsys, "gray", "--p", "3", "--u", "4")
        assert code == 0
        assert out == "1 2 0\n"

    def test_identity_sweep(self, capsys):
        code, out, _ = run(capsys, "gray", "--p", "5", "--check-identity")
        assert code == 0
        assert out == "checked 625 pairs: 0 violations\n"

    def test_coeffs_flag(self, capsys):
        code, out, _ = run(capsys, "gray", "--p", "5", "--coeffs")
        assert code == 0
        assert out.startswith("20*u^4*v")

    def test_nothing_to_do(self, capsys):
        code, _, err = run(capsys, "gray", "--p", "5")
        assert code == 2
        assert "nothing to do" in err

    def test_bad_prime(self, capsys):
        code, _, err = run(capsys, "gray", "--p", "4", "--u", "0")
        assert code == 2
        assert "odd prime" in err

    def test_out_of_range_residue(self, capsys):
        code, _, err = run(capsys, "gray", "--p", "3", "--u", "9")
        assert code == 2


class TestCoeffs:
    def test_json_payload(self, capsys):
        code, out, _ = run(capsys, "coeffs", "--p", "5")
        assert code == 0
        data = json.loads(out)
        assert data["p"] == 5
        assert len(data["terms"]) == 9
        assert data["terms"]["4,1"] == 20
        assert data["degrees"] == [3, 4, 5]
        assert [0, 3] in data["support"]

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "coeffs.json"
        code, out, _ = run(capsys, "coeffs", "--p", "3", "--out", str(path))
        assert code == 0 and out == ""
        assert json.loads(path.read_text())["p"] == 3


class TestConstruct:
    TYPE = ["--p", "5", "--type", "2,20,1,2,1"]

    def test_range_echo(self, capsys):
        code, out, _ = run(capsys, "construct", *self.TYPE)
        assert code == 0
        data = json.loads(out)
        assert data["rank_range"] == [5, 18]
        assert data["pair_rbar_ranges"] == {"0": [0, 0], "1": [1, 2], "2": [1, 13]}

    def test_rank_target_to_files(self, capsys, tmp_path):
        spec = tmp_path / "code.json"
        code, out, _ = run(capsys, "construct", *self.TYPE, "--rank", "7", "--out", str(spec))
        assert code == 0
        paths = json.loads(out)
        assert paths == {"code": str(spec), "plan": str(tmp_path / "code.plan.json")}
        built = load_code(spec)
        assert built.code_type.as_tuple() == (2, 20, 1, 2, 1)
        plan = load_plan(tmp_path / "code.plan.json")
        assert plan.target == {"rank": 7}

    def test_rank_target_to_stdout(self, capsys):
        code, out, _ = run(capsys, "construct", *self.TYPE, "--rank", "5")
        assert code == 0
        data = json.loads(out)
        assert data["p"] == 5 and len(data["rows"]) == 3

    def test_pair_target(self, capsys, tmp_path):
        spec = tmp_path / "pair.json"
        code, _, _ = run(
            capsys, "construct", *self.TYPE, "--pair", "1,2", "--out", str(spec)
        )
        assert code == 0
        assert load_plan(tmp_path / "pair.plan.json").target == {"pair": [1, 2]}

    def test_inadmissible_rank(self, capsys):
        code, _, err = run(capsys, "construct", *self.TYPE, "--rank", "4")
        assert code == 2
        assert "admissible ranks: 5..18" in err

    def test_inadmissible_pair(self, capsys):
        code, _, err = run(capsys, "construct", *self.TYPE, "--pair", "0,1")
        assert code == 2
        assert "inadmissible" in err

    def test_both_targets_rejected(self, capsys):
        code, _, err = run(capsys, "construct", *self.TYPE, "--rank", "7", "--pair", "1,1")
        assert code == 2
        assert "only one" in err

    def test_invalid_type(self, capsys):
        code, _, err = run(capsys, "construct", "--p", "5", "--type", "2,20,0,0,0")
        assert code == 2


class TestAnalyze:
    def make_spec(self, capsys, tmp_path, rank="7"):
        spec = tmp_path / "code.json"
        run(capsys, "construct", "--p", "5", "--type", "2,20,1,2,1", "--rank", rank,
            "--out", str(spec))
        return spec

    def test_report(self, capsys, tmp_path):
        spec = self.make_spec(capsys, tmp_path)
        code, out, _ = run(capsys, "analyze", str(spec))
        assert code == 0
        report = json.loads(out)
        assert report["rank"] == 7
        assert report["method_agreement"] is True
        assert report["bounds"]["r_max"] == 18
        assert not report["bounds"]["r_max_violated"]

    def test_cap_marks_skipped(self, capsys, tmp_path):
        spec = self.make_spec(capsys, tmp_path)
        code, out, _ = run(capsys, "analyze", str(spec), "--cap", "100")
        assert code == 0
        report = json.loads(out)
        assert report["ker"] == "skipped"
        assert report["rank"] == 7

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", str(tmp_path / "absent.json"))
        assert code == 2
        assert "cannot load" in err

    def test_corrupt_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\"p\": 5}")
        code, _, err = run(capsys, "analyze", str(bad))
        assert code == 2


class TestVerify:
    def test_small_campaign_passes(self, capsys):
        code, out, err = run(capsys, "verify", "--p", "13")
        assert code == 0
        report = json.loads(out)
        assert report["summary"]["total"] == 11
        assert report["summary"]["failed"] == 0
        assert report["summary"]["passed"] >= 2
        assert "backend:" in err
        assert "[11/11]" in err

    def test_csv_projection(self, capsys):
        code, out, _ = run(capsys, "verify", "--p", "13", "--format", "csv")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "check,status,instances,caveat"
        assert len(lines) == 12
        assert lines[1].startswith("gray_additivity,skipped")

    def test_report_files_are_deterministic(self, capsys, tmp_path):
        f1, f2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert run(capsys, "verify", "--p", "13", "--out", str(f1))[0] == 0
        assert run(capsys, "verify", "--p", "13", "--out", str(f2))[0] == 0
        assert f1.read_bytes() == f2.read_bytes()

    def test_failed_check_sets_exit_code(self, capsys, monkeypatch):
        import zpzp2.cli as cli_mod

        def fake_campaign(config, progress=None):
            return {
                "config": config.to_dict(),
                "checks": [{"check": "stub", "status": "fail"}],
                "summary": {"total": 1, "passed": 0, "failed": 1, "skipped": 0,
                            "findings": []},
            }

        monkeypatch.setattr(cli_mod, "run_campaign", fake_campaign)
        code, _, _ = run(capsys, "verify", "--p", "13")
        assert code == 1


def test_unknown_subcommand_exits_via_argparse(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])
