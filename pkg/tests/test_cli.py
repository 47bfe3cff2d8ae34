from __future__ import annotations

import json

import pytest

from cuegraph.cli import main


class TestAnalyze:
    def test_json_report(self, fixtures, capsys):
        code = main(["analyze", str(fixtures["analogy_initial.cga"]), "--format", "json"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["concept_count"] == 24
        assert report["paths"]["length_histogram"] == {"2": 1, "3": 5, "4": 3, "5": 4}
        assert report["path_delta"] is None

    def test_text_report(self, fixtures, capsys):
        code = main(["analyze", str(fixtures["analogy_initial.cga"])])
        assert code == 0
        out = capsys.readouterr().out
        assert "concepts: 24" in out
        assert "central concepts:" in out

    def test_merge_reports_path_delta(self, fixtures, capsys):
        code = main(
            [
                "analyze",
                str(fixtures["analogy_initial.cga"]),
                "--merge",
                str(fixtures["analogy_llm_delta.cga"]),
                "--format",
                "json",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["concept_count"] == 54
        assert report["path_delta"]["path_count"] == 19

    def test_analogy_map_adds_findings(self, fixtures, capsys):
        code = main(
            [
                "analyze",
                str(fixtures["analogy_initial.cga"]),
                "--merge",
                str(fixtures["analogy_llm_delta.cga"]),
                "--analogy-map",
                str(fixtures["swan_lake_map.json"]),
                "--format",
                "json",
            ]
        )
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert len(report["inconsistencies"]) == 2

    def test_missing_file_fails_cleanly(self, capsys, tmp_path):
        code = main(["analyze", str(tmp_path / "absent.cga")])
        captured = capsys.readouterr()
        assert code == 1
        assert captured.out == ""
        assert captured.err.startswith("error:")

    def test_bad_annotation_fails_cleanly(self, capsys, tmp_path):
        bad = tmp_path / "bad.cga"
        bad.write_text("#paragraph r0\nS1: A.\n  verb: a\n  verb: b\n", "utf-8")
        code = main(["analyze", str(bad)])
        captured = capsys.readouterr()
        assert code == 1
        assert "error:" in captured.err


class TestUsage:
    def test_no_command_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_unknown_flag_is_usage_error(self, fixtures):
        with pytest.raises(SystemExit) as err:
            main(["analyze", str(fixtures["analogy_initial.cga"]), "--loud"])
        assert err.value.code == 2


class TestExplore:
    def run(self, fixtures, capsys):
        code = main(
            [
                "explore",
                "--paragraph",
                str(fixtures["analogy_paragraph.txt"]),
                "--provider",
                f"replay:{fixtures['analogy_replay.json']}",
                "--policy",
                f"replay:{fixtures['analogy.trace']}",
            ]
        )
        assert code == 0
        return capsys.readouterr().out

    def test_replay_run_is_byte_identical(self, fixtures, capsys):
        first = self.run(fixtures, capsys)
        second = self.run(fixtures, capsys)
        assert first == second
        doc = json.loads(first)
        assert doc["session"]["state"] == "done"

    def test_replay_reproduces_selected_cues(self, fixtures, capsys):
        doc = json.loads(self.run(fixtures, capsys))
        selected = {
            cue_id
            for thread in doc["session"]["threads"]
            for cue_id in thread["selected_cue_ids"]
        }
        assert selected == {
            "PROMPT2.2",
            "PROMPT3.2",
            "PROMPT3.4",
            "PROMPT4.4",
            "PROMPT4.7",
            "PROMPT7.6",
            "PROMPT7.7",
        }

    def test_bad_provider_spec(self, fixtures, capsys):
        code = main(
            [
                "explore",
                "--paragraph",
                str(fixtures["analogy_paragraph.txt"]),
                "--provider",
                "telepathy",
                "--policy",
                "auto",
            ]
        )
        assert code == 1
        assert "provider spec" in capsys.readouterr().err


class TestExport:
    def test_annotation_to_dot(self, fixtures, capsys):
        code = main(["export", "--annotation", str(fixtures["analogy_llm_delta.cga"])])
        assert code == 0
        out = capsys.readouterr().out
        assert out.startswith("digraph")
        assert "peripheries=2" in out  # model-origin nodes are double-ringed
        assert "style=dashed" in out  # implied edges

    def test_annotation_to_json(self, fixtures, capsys):
        code = main(
            [
                "export",
                "--annotation",
                str(fixtures["analogy_initial.cga"]),
                "--format",
                "json",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["concepts"]) == 24

    def test_session_export(self, fixtures, tmp_path, capsys):
        explore_code = main(
            [
                "explore",
                "--paragraph",
                str(fixtures["analogy_paragraph.txt"]),
                "--provider",
                f"replay:{fixtures['analogy_replay.json']}",
                "--policy",
                f"replay:{fixtures['analogy.trace']}",
            ]
        )
        assert explore_code == 0
        doc = json.loads(capsys.readouterr().out)
        doc["session"]["annotations"]["0"] = fixtures["analogy_initial.cga"].read_text(
            "utf-8"
        )
        session_file = tmp_path / "session.json"
        session_file.write_text(json.dumps(doc), "utf-8")
        code = main(["export", "--session", str(session_file), "--format", "json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["concepts"]) == 24

    def test_exactly_one_source_required(self, fixtures, capsys):
        code = main(
            [
                "export",
                "--annotation",
                str(fixtures["analogy_initial.cga"]),
                "--session",
                "whatever.json",
            ]
        )
        assert code == 1
        assert "exactly one" in capsys.readouterr().err

    def test_session_without_annotation_fails(self, fixtures, tmp_path, capsys):
        main(
            [
                "explore",
                "--paragraph",
                str(fixtures["analogy_paragraph.txt"]),
                "--provider",
                f"replay:{fixtures['analogy_replay.json']}",
                "--policy",
                f"replay:{fixtures['analogy.trace']}",
            ]
        )
        doc = json.loads(capsys.readouterr().out)
        session_file = tmp_path / "session.json"
        session_file.write_text(json.dumps(doc), "utf-8")
        code = main(["export", "--session", str(session_file)])
        assert code == 1
        assert "no annotation" in capsys.readouterr().err
