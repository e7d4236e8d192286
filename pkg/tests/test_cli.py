"""Command line behavior: verbs, exit codes, output contracts."""

from __future__ import annotations

import json

import pytest

from criteria_loop.cli import RUNTIME_EXIT, USAGE_EXIT, main

from .record_goldens import BASELINE_ROUNDS, BASELINE_SEED, GOLDEN_DIR

PROFILE = str(GOLDEN_DIR / "profile_baseline.json")
SESSION_FILE = str(GOLDEN_DIR / "fixture_session.json")


class TestUsageErrors:
    def test_no_command(self, capsys):
        assert main([]) == USAGE_EXIT
        assert "usage" in capsys.readouterr().err

    def test_unknown_command(self):
        assert main(["mystery"]) == USAGE_EXIT

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == 0
        assert "simulate" in capsys.readouterr().out

    def test_simulate_requires_profile(self, capsys):
        assert main(["simulate"]) == USAGE_EXIT
        assert "--profile" in capsys.readouterr().err

    def test_export_rejects_unknown_format(self):
        assert main(["export", "--session-file", SESSION_FILE, "--format", "pdf"]) == USAGE_EXIT

    def test_serve_rejects_bad_port(self):
        assert main(["serve", "--port", "not-a-number"]) == USAGE_EXIT


class TestSimulateVerb:
    def test_prints_baseline_report(self, capsys):
        code = main(
            [
                "simulate",
                "--profile",
                PROFILE,
                "--rounds",
                str(BASELINE_ROUNDS),
                "--seed",
                str(BASELINE_SEED),
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        golden = json.loads((GOLDEN_DIR / "simulation_baseline.json").read_text())
        assert report == golden

    def test_out_flag_writes_file(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["simulate", "--profile", PROFILE, "--seed", "2", "--out", str(out)])
        assert code == 0
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text())["seed"] == 2

    def test_assertive_flag_accepted(self, capsys):
        assert main(["simulate", "--profile", PROFILE, "--rounds", "1", "--assertive"]) == 0
        assert json.loads(capsys.readouterr().out)["rounds_run"] == 1

    def test_missing_profile_is_runtime_error(self, tmp_path, capsys):
        code = main(["simulate", "--profile", str(tmp_path / "ghost.json")])
        assert code == RUNTIME_EXIT
        assert "error [io-error]" in capsys.readouterr().err

    def test_zero_rounds_is_runtime_error(self, capsys):
        code = main(["simulate", "--profile", PROFILE, "--rounds", "0"])
        assert code == RUNTIME_EXIT
        assert "error [invalid-config]" in capsys.readouterr().err


class TestExportVerb:
    def test_json_matches_golden(self, capsys):
        assert main(["export", "--session-file", SESSION_FILE]) == 0
        expected = (GOLDEN_DIR / "export_fixture.json").read_text(encoding="utf-8")
        assert capsys.readouterr().out == expected

    def test_markdown_matches_golden(self, capsys):
        assert main(["export", "--session-file", SESSION_FILE, "--format", "markdown"]) == 0
        expected = (GOLDEN_DIR / "export_fixture.md").read_text(encoding="utf-8")
        assert capsys.readouterr().out == expected

    def test_corrupt_file_is_runtime_error(self, tmp_path, capsys):
        broken = tmp_path / "broken.json"
        broken.write_bytes((GOLDEN_DIR / "fixture_session.json").read_bytes()[:-100])
        assert main(["export", "--session-file", str(broken)]) == RUNTIME_EXIT
        assert "error [corrupt-log]" in capsys.readouterr().err


class TestReplayVerb:
    def test_prints_summary_lines(self, capsys):
        assert main(["replay", "--session-file", SESSION_FILE]) == 0
        out = capsys.readouterr().out
        assert out.startswith("session fixture-11: finished (round 2)")
        assert "round 1:" in out
        assert "round 2:" in out
        assert "criterion '" in out

    def test_missing_file_is_runtime_error(self, tmp_path, capsys):
        assert main(["replay", "--session-file", str(tmp_path / "none.json")]) == RUNTIME_EXIT
        assert "error [io-error]" in capsys.readouterr().err
