import csv
import json
import os
import subprocess
import sys

import pytest

from dpcwiretap import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


class TestDetCapacity:
    def test_both_above(self, capsys):
        code, out, _ = run(capsys, "det-capacity", "--n1", "4", "--m1", "1", "--n2", "2", "--m2", "1")
        assert code == 0
        assert "both-above" in out and "Cs (case formula) = 3" in out and "C_K = 3" in out

    def test_equal_differences(self, capsys):
        code, out, _ = run(capsys, "det-capacity", "--n1", "3", "--m1", "2", "--n2", "2", "--m2", "1",
                           "--json")
        rec = json.loads(out)
        assert code == 0 and rec["cs_cases"] == rec["cs_rank"] == 1
        assert rec["case_label"] == "equal-differences"

    def test_all_zero(self, capsys):
        code, out, _ = run(capsys, "det-capacity", "--n1", "0", "--m1", "0", "--n2", "0", "--m2", "0",
                           "--json")
        assert code == 0 and json.loads(out)["cs_rank"] == 0

    def test_negative_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["det-capacity", "--n1", "-1", "--m1", "0", "--n2", "0", "--m2", "0"])
        assert exc.value.code == 2


class TestGauss:
    def test_report(self, capsys):
        code, out, _ = run(capsys, "gauss", "--h1", "1", "--g1", "1", "--beta", "0.5")
        assert code == 0
        assert "secrecy lower=0.292481 upper=0.500000" in out
        assert "key lower=0.500000 upper=0.660964" in out
        assert "h1T_sq=0.618034" in out

    def test_beta_one_key_zero(self, capsys):
        _, out, _ = run(capsys, "gauss", "--h1", "1", "--g1", "1", "--beta", "1.0", "--json")
        rec = json.loads(out)
        assert rec["key_lower"] == pytest.approx(0.0, abs=1e-12)
        assert rec["key_upper"] == pytest.approx(0.0, abs=1e-12)

    def test_rho_not_applicable(self, capsys):
        _, out, _ = run(capsys, "gauss", "--h1", "0.2", "--g1", "1", "--beta", "0.5")
        assert "rho_star=NA" in out and "valid=false" in out

    def test_beta_out_of_range(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["gauss", "--h1", "1", "--g1", "1", "--beta", "1.5"])
        assert exc.value.code == 2


class TestVerify:
    def test_det_formulas(self, capsys):
        code, out, _ = run(capsys, "verify", "det-formulas")
        assert code == 0 and "1296 checks, 0 failures" in out

    def test_secrecy_gap_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "thm3-gap", "--json")
        assert code == 0 and json.loads(out)[0]["failures"] == 0

    def test_rank_suite_vacuous(self, capsys):
        code, out, _ = run(capsys, "verify", "lemma1", "--trials", "0")
        assert code == 0 and "0 checks" in out

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["verify", "nope"])
        assert exc.value.code == 2


class TestSweep:
    def test_fig2_alpha_one_regime(self, tmp_path, capsys):
        out = tmp_path / "f2.csv"
        code, _, _ = run(capsys, "sweep", "--figure", "fig2", "--points", "2", "--h1sq-min", "2",
                         "--h1sq-max", "2", "--out", str(out))
        rows = read_csv(out)
        assert code == 0
        assert rows[0] == ["h1sq", "alpha_star", "rate_alpha_star", "rate_alpha_1", "upper_bound"]
        assert rows[1] == rows[2]
        assert rows[1][1] == "1.000000" and rows[1][2] == rows[1][3]

    def test_fig3_invalid_rows(self, tmp_path, capsys):
        out = tmp_path / "f3.csv"
        run(capsys, "sweep", "--figure", "fig3", "--points", "5", "--h1sq-min", "0.01",
            "--h1sq-max", "100", "--out", str(out))
        rows = read_csv(out)
        assert rows[0] == ["h1sq", "key_rate_rho_star", "key_rate_rho_0", "key_upper", "valid"]
        first = rows[1]
        assert first[1] == first[2] == "NA" and first[4] == "false"
        assert rows[-1][4] == "true" and "NA" not in rows[-1]

    def test_format_and_manifest(self, tmp_path, capsys):
        out = tmp_path / "f.csv"
        run(capsys, "sweep", "--figure", "fig2", "--points", "7", "--out", str(out))
        raw = out.read_bytes()
        assert b"\r" not in raw and raw.endswith(b"\n")
        raw.decode("utf-8")
        text = (tmp_path / "f.csv.manifest.json").read_text(encoding="utf-8")
        man = json.loads(text)
        assert man["subcommand"] == "sweep" and man["params"]["points"] == 7
        assert list(man) == sorted(man)
        assert json.dumps(man, sort_keys=True, indent=2) + "\n" == text

    def test_replay_identical(self, tmp_path, capsys):
        out = tmp_path / "f.csv"
        run(capsys, "sweep", "--figure", "fig3", "--points", "9", "--out", str(out))
        first = out.read_bytes()
        copy = tmp_path / "again.csv"
        code, _, _ = run(capsys, "replay", str(tmp_path / "f.csv.manifest.json"), "--out", str(copy))
        assert code == 0 and copy.read_bytes() == first

    def test_range_validation(self):
        with pytest.raises(SystemExit):
            cli.main(["sweep", "--figure", "fig2", "--points", "1"])
        with pytest.raises(SystemExit):
            cli.main(["sweep", "--figure", "fig2", "--h1sq-min", "1e-5"])

    def test_unwritable_path(self, tmp_path, capsys):
        code, _, err = run(capsys, "sweep", "--figure", "fig2", "--points", "2",
                           "--out", str(tmp_path / "missing" / "x.csv"))
        assert code != 0 and "error" in err


class TestSimulate:
    def test_zero_rate(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        code, _, _ = run(capsys, "simulate", "--n1", "2", "--m1", "1", "--n2", "1", "--m2", "1",
                         "--n", "3", "--rate", "0", "--rate-confusion", "1/3", "--seeds", "4",
                         "--out", str(out))
        rows = read_csv(out)
        assert code == 0
        assert rows[0] == ["seed", "error", "leakage_bits_per_use", "covering_failure"]
        assert [r[0] for r in rows[1:]] == ["0", "1", "2", "3", "mean"]
        assert all(r[2] == "0.000000" for r in rows[1:])

    def test_mean_leakage_example(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        run(capsys, "simulate", "--n1", "2", "--m1", "1", "--n2", "1", "--m2", "1", "--n", "3",
            "--rate", "1/3", "--rate-confusion", "1/3", "--seeds", "20", "--out", str(out))
        rows = read_csv(out)
        assert len(rows) == 22 and float(rows[-1][2]) < 0.15

    def test_replay_identical(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        run(capsys, "simulate", "--n1", "1", "--m1", "1", "--n2", "1", "--m2", "0", "--n", "4",
            "--rate", "0.25", "--rate-confusion", "0.5", "--seeds", "3", "--seed", "10",
            "--out", str(out))
        man = json.loads((tmp_path / "s.csv.manifest.json").read_text())
        assert man["seeds"] == [10, 11, 12] and man["params"]["rate"] == "1/4"
        again = tmp_path / "t.csv"
        run(capsys, "replay", str(tmp_path / "s.csv.manifest.json"), "--out", str(again))
        assert again.read_bytes() == out.read_bytes()

    def test_budget_refusal(self, capsys):
        code, _, err = run(capsys, "--budget", "10", "simulate", "--n1", "2", "--m1", "1", "--n2", "1",
                           "--m2", "1", "--n", "4", "--rate", "1/4")
        assert code == 3 and "bins*subbins*states" in err
        assert "WIRETAP_DET_BUDGET" not in os.environ

    def test_blocklength_refusal(self, capsys):
        code, _, err = run(capsys, "simulate", "--n1", "5", "--m1", "1", "--n2", "1", "--m2", "1",
                           "--n", "5", "--rate", "0")
        assert code == 3 and "q*n" in err

    def test_bad_rate(self, capsys):
        code, _, err = run(capsys, "simulate", "--n1", "1", "--m1", "1", "--n2", "1", "--m2", "1",
                           "--n", "3", "--rate", "1/2")
        assert code == 2 and "multiple of 1/n" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dpcwiretap", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
