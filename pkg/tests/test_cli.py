import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from affine_verifiers import LanguageOracle, ProtocolParams, cli, report
from affine_verifiers.machine import dump_machine
from affine_verifiers.protocols import build_weak
from affine_verifiers.report import VerificationReport, emit_report, run_verify

DATA = Path(__file__).parent / "data"


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "affine_verifiers", *map(str, args)],
                          capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr.decode()


def rows_of(stdout):
    return {row["word"]: row for row in json.loads(stdout)["rows"]}


class TestVerify:
    def test_single_member_language(self):
        code, out, _ = run("verify", DATA / "one.json", "--max-len", 2, "--format", "json")
        assert code == 0
        rows = rows_of(out)
        assert list(rows) == ["", "0", "1", "00", "01", "10", "11"]
        assert rows["1"]["honest_lo"] == "1/1" and rows["1"]["verdict"] == "PASS"
        # beta_3 = 1/6 - 1 for the best cheat on "0": 1 / (1 + (5/2)(5/6))
        assert rows["0"]["max_hi"] == "12/37" and rows["0"]["verdict"] == "PASS"
        assert all(F(r["max_hi"]) <= F(1, 3) for w, r in rows.items() if w != "1")

    def test_strong_empty_language(self):
        code, out, _ = run("verify", DATA / "empty.json", "--max-len", 1, "--strong", "--format", "json")
        assert code == 0
        for row in rows_of(out).values():
            assert row["halting"] is True
            assert F(row["reject_lo"]) >= F(2, 3)

    def test_unsupported_k(self):
        code, _, err = run("verify", DATA / "one.json", "--k", 2)
        assert code == 2 and "k must be" in err

    def test_malformed_spec(self):
        code, _, err = run("verify", DATA / "malformed.json")
        assert code == 2 and "line 2" in err

    def test_missing_file(self):
        code, _, _ = run("verify", DATA / "nope.json")
        assert code == 2

    def test_alphabet_mismatch(self):
        code, _, err = run("verify", DATA / "one.json", "--r", 3)
        assert code == 2 and "language is over 2" in err

    def test_usage_error(self):
        code, _, _ = run("verify")
        assert code == 2

    def test_unbounded_language_uses_intervals(self):
        code, out, _ = run("verify", DATA / "ends_in_one.json", "--max-len", 2, "--depth", 8,
                           "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["params"]["depth"] == 8
        one = rows_of(out)["1"]
        assert F(one["honest_lo"]) < F(one["honest_hi"])

    def test_dfa_spec(self):
        code, out, _ = run("verify", DATA / "parity.json", "--input", "", "--input", "11",
                           "--input", "1", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.decode())))
        assert [r["word"] for r in rows] == ["", "11", "1"]
        assert [r["member"] for r in rows] == ["True", "True", "False"]

    @pytest.mark.parametrize("fmt", ["text", "json", "csv"])
    def test_byte_deterministic(self, fmt):
        args = ("verify", DATA / "one.json", "--max-len", 2, "--samples", 200, "--seed", 5, "--format", fmt)
        assert run(*args)[1] == run(*args)[1]

    def test_golden_text(self):
        _, out, _ = run("verify", DATA / "one.json", "--max-len", 2)
        assert out.decode() == (DATA / "golden_verify_one.txt").read_text(encoding="utf-8")

    def test_config_precedence(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"k": 5, "format": "json", "max-len": 1}))
        code, out, _ = run("verify", DATA / "one.json", "--config", cfg)
        data = json.loads(out)
        assert code == 0 and data["params"]["k"] == 5 and len(data["rows"]) == 3
        code, out, _ = run("verify", DATA / "one.json", "--config", cfg, "--k", 4)
        assert json.loads(out)["params"]["k"] == 4

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"colour": 1}))
        assert run("verify", DATA / "one.json", "--config", cfg)[0] == 2

    def test_fail_verdict_gives_exit_one(self, monkeypatch, capsysbinary):
        real = report.verify_word

        def broken(*args, **kwargs):
            row = real(*args, **kwargs)
            return report.ReportRow(**{**row.__dict__, "verdict": report.FAIL})

        monkeypatch.setattr(report, "verify_word", broken)
        assert cli.main(["verify", str(DATA / "one.json"), "--input", "1"]) == 1


class TestOtherCommands:
    def test_build_matches_dump(self):
        code, out, _ = run("build", DATA / "one.json")
        L = LanguageOracle.finite(["1"], 2, 2, "one")
        assert code == 0 and out.decode() == dump_machine(build_weak(L))

    def test_trace(self):
        code, out, _ = run("trace", DATA / "one.json", "--input", "1")
        assert code == 0
        text = out.decode()
        assert "halted in accept after 8 steps" in text
        assert "(1/1, 2/1, -2/1, 1/36, -1/36)" in text

    def test_trace_json(self):
        code, out, _ = run("trace", DATA / "one.json", "--input", "1", "--format", "json")
        record = json.loads(out)[0]
        assert record["final_state"] == "accept" and len(record["steps"]) == 8

    def test_trace_needs_input(self):
        assert run("trace", DATA / "one.json")[0] == 2

    def test_adversary_with_brute_force(self):
        code, out, _ = run("adversary", DATA / "empty.json", "--input", "0", "--horizon", 5,
                           "--brute-force", "--format", "json")
        record = json.loads(out)[0]
        assert code == 0
        assert record["max_lo"] == record["brute_force"] == "2/7"
        assert record["witness"] == "01@2"

    def test_sample(self):
        code, out, _ = run("sample", DATA / "empty.json", "--input", "0", "--strategy", "01@2",
                           "--samples", 3000, "--format", "json")
        record = json.loads(out)[0]
        assert code == 0 and record["exact_accept"] == "2/7" and record["within_4_sigma"]

    def test_bad_strategy(self):
        assert run("sample", DATA / "empty.json", "--input", "0", "--strategy", "0@2")[0] == 2


class TestReport:
    def test_empty_report_is_header_only(self):
        empty = VerificationReport("L", ProtocolParams(), None, 0, 0)
        text = emit_report(empty, "text").decode().splitlines()
        assert len(text) == 2 and text[1].split()[0] == "word"
        assert emit_report(empty, "csv").decode().count("\n") == 1
        assert json.loads(emit_report(empty, "json"))["rows"] == []

    def test_rationals_verbatim(self):
        rep = run_verify(LanguageOracle.finite([]), inputs=["0"])
        data = json.loads(emit_report(rep, "json"))
        assert data["rows"][0]["max_hi"] == "2/7"
        assert '"2/7"' in emit_report(rep, "json").decode()
        assert "2/7" in emit_report(rep, "csv").decode()
        assert "2/7 (~0.285714)" in emit_report(rep, "text").decode()

    def test_exit_code_iff_all_pass(self):
        rep = run_verify(LanguageOracle.finite(["1"]), max_len=1)
        assert rep.all_pass and rep.exit_code == 0
        bad = VerificationReport(rep.language, rep.params, None, 0, 0,
                                 rep.rows[:1] + (report.ReportRow(**{**rep.rows[1].__dict__,
                                                                     "verdict": report.INCONCLUSIVE}),))
        assert bad.exit_code == 1

    def test_timing_only_on_request(self):
        rep = run_verify(LanguageOracle.finite(["1"]), inputs=["1"])
        assert rep.rows[0].wall_time is None
        rep = run_verify(LanguageOracle.finite(["1"]), inputs=["1"], timing=True)
        assert rep.rows[0].wall_time >= 0

    def test_rows_follow_input_order(self):
        rep = run_verify(LanguageOracle.finite(["1"]), inputs=["11", "", "1"])
        assert [r.word for r in rep.rows] == ["11", "", "1"]

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            emit_report(VerificationReport("L", ProtocolParams(), None, 0, 0), "xml")

    def test_monte_carlo_column(self):
        rep = run_verify(LanguageOracle.finite(["1"]), inputs=["1"], samples=50, seed=2)
        assert rep.rows[0].mc_accept == 1
