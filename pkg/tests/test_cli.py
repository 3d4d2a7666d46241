"""Command-line interface: exit codes, file outputs, stdout JSON."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from alignsum import load_alignment
from alignsum.cli import main
from alignsum.corpus_model import load_report
from conftest import proportional_meeting, shuffled_verbosity_meeting, write_meeting_dir


@pytest.fixture
def meeting(tmp_path):
    bundle, gold = shuffled_verbosity_meeting("meetX")
    return write_meeting_dir(tmp_path / "data", bundle, gold)


def read_stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestUsage:
    def test_missing_subcommand_is_usage_error(self) -> None:
        assert main([]) == 2

    def test_missing_required_flags_is_usage_error(self) -> None:
        assert main(["align"]) == 2

    def test_help_exits_zero(self) -> None:
        assert main(["--help"]) == 0

    def test_console_script_is_wired(self) -> None:
        proc = subprocess.run(
            [sys.executable, "-m", "alignsum.cli"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2


class TestSegment:
    def test_writes_report_json(self, tmp_path) -> None:
        raw = tmp_path / "report.txt"
        raw.write_text(
            "M. Martin Bonjour tout le monde. Mme Rey Merci bien.",
            encoding="utf-8",
        )
        out = tmp_path / "report.json"
        assert main(["segment", "--text", str(raw), "--out", str(out)]) == 0
        doc = load_report(out)
        assert [seg.speaker for seg in doc.segments] == ["Martin", "Rey"]

    def test_custom_patterns_file(self, tmp_path) -> None:
        raw = tmp_path / "report.txt"
        raw.write_text("HOST=ann hello. HOST=bob goodbye.", encoding="utf-8")
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps([r"HOST=(\w+)"]), encoding="utf-8")
        out = tmp_path / "report.json"
        code = main(
            [
                "segment",
                "--text",
                str(raw),
                "--out",
                str(out),
                "--patterns",
                str(patterns),
            ]
        )
        assert code == 0
        assert [seg.speaker for seg in load_report(out).segments] == ["ann", "bob"]

    def test_bad_patterns_file_fails(self, tmp_path) -> None:
        raw = tmp_path / "report.txt"
        raw.write_text("Text here.", encoding="utf-8")
        patterns = tmp_path / "patterns.json"
        patterns.write_text(json.dumps({"not": "a list"}), encoding="utf-8")
        code = main(
            [
                "segment",
                "--text",
                str(raw),
                "--out",
                str(tmp_path / "o.json"),
                "--patterns",
                str(patterns),
            ]
        )
        assert code == 1

    def test_missing_input_fails(self, tmp_path) -> None:
        code = main(
            [
                "segment",
                "--text",
                str(tmp_path / "absent.txt"),
                "--out",
                str(tmp_path / "o.json"),
            ]
        )
        assert code == 1


class TestAlign:
    def test_config_alignment(self, meeting, tmp_path) -> None:
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"scorer": "rouge1"}), encoding="utf-8")
        out = tmp_path / "hyp.json"
        code = main(
            [
                "align",
                "--meeting",
                str(meeting),
                "--config",
                str(config),
                "--out",
                str(out),
            ]
        )
        assert code == 0
        alignment = load_alignment(out)
        assert alignment.source == "auto"
        assert alignment.meeting_id == "meetX"
        assert alignment.config["scorer"] == "rouge1"

    def test_diagonal_alignment(self, meeting, tmp_path) -> None:
        out = tmp_path / "diag.json"
        assert main(["align", "--meeting", str(meeting), "--diagonal", "--out", str(out)]) == 0
        assert load_alignment(out).source == "diagonal"

    def test_embeddings_flag_overrides_config(
        self, meeting, tmp_path, embedding_path, monkeypatch
    ) -> None:
        monkeypatch.delenv("ALIGNSUM_EMBEDDINGS", raising=False)
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"scorer": "embedding"}), encoding="utf-8")
        out = tmp_path / "emb.json"
        args = ["align", "--meeting", str(meeting), "--config", str(config), "--out", str(out)]
        assert main(args) == 1
        assert main(args[:-2] + ["--embeddings", str(embedding_path), "--out", str(out)]) == 0
        assert load_alignment(out).source == "auto"

    def test_requires_config_or_diagonal(self, meeting, tmp_path) -> None:
        code = main(
            ["align", "--meeting", str(meeting), "--out", str(tmp_path / "x.json")]
        )
        assert code == 1


class TestBaseline:
    def test_texttiling_to_stdout(self, meeting, capsys) -> None:
        assert main(["baseline", "--algo", "texttiling", "--meeting", str(meeting)]) == 0
        bounds = read_stdout_json(capsys)
        assert isinstance(bounds, list)
        assert all(isinstance(b, int) for b in bounds)

    def test_c99_derives_segment_count_from_report(self, meeting, capsys) -> None:
        assert main(["baseline", "--algo", "c99", "--meeting", str(meeting)]) == 0
        bounds = read_stdout_json(capsys)
        # meetX has three report segments, so two boundaries.
        assert len(bounds) == 2

    def test_c99_without_segment_count_fails(self, meeting, tmp_path) -> None:
        code = main(
            [
                "baseline",
                "--algo",
                "c99",
                "--transcription",
                str(meeting / "transcription.json"),
            ]
        )
        assert code == 1

    def test_out_file(self, meeting, tmp_path) -> None:
        out = tmp_path / "bounds.json"
        code = main(
            [
                "baseline",
                "--algo",
                "c99",
                "--meeting",
                str(meeting),
                "--segments",
                "2",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        assert isinstance(json.loads(out.read_text(encoding="utf-8")), list)

    def test_needs_some_input(self) -> None:
        assert main(["baseline", "--algo", "texttiling"]) == 1


class TestEval:
    def write_hyp(self, meeting, mapping) -> None:
        from conftest import mapping_alignment
        from alignsum import write_alignment
        from alignsum.corpus_model import load_meeting_dir

        bundle = load_meeting_dir(meeting)
        write_alignment(
            mapping_alignment(bundle, mapping, source="auto"),
            meeting / "alignment.json",
        )

    def test_meeting_mode_defaults(self, meeting, capsys) -> None:
        self.write_hyp(meeting, [0, 1, 2])
        assert main(["eval", "--meeting", str(meeting)]) == 0
        report = read_stdout_json(capsys)
        assert report["per_file"][0]["meeting_id"] == "meetX"
        assert report["per_file"][0]["seg_acc"] == 1.0
        assert report["micro"]["seg_acc"] == 1.0

    def test_direct_file_mode_infers_meeting_dir(self, meeting, capsys) -> None:
        self.write_hyp(meeting, [0, 0, 1])
        gold = meeting / "gold.json"
        hyp = meeting / "alignment.json"
        assert main(["eval", "--gold", str(gold), "--hyp", str(hyp)]) == 0
        report = read_stdout_json(capsys)
        assert report["micro"]["seg_acc"] == pytest.approx(1 / 3)

    def test_meeting_id_mismatch_fails(self, meeting, tmp_path, capsys) -> None:
        other_dir = write_meeting_dir(
            tmp_path / "other", *proportional_meeting(2, 1, "meetY")
        )
        code = main(
            [
                "eval",
                "--gold",
                str(meeting / "gold.json"),
                "--hyp",
                str(other_dir / "gold.json"),
            ]
        )
        assert code == 1

    def test_explicit_window_size(self, meeting, capsys) -> None:
        self.write_hyp(meeting, [0, 1, 2])
        assert main(["eval", "--meeting", str(meeting), "--k", "3"]) == 0
        assert read_stdout_json(capsys)["per_file"][0]["k"] == 3

    def test_out_file(self, meeting, tmp_path) -> None:
        self.write_hyp(meeting, [0, 1, 2])
        out = tmp_path / "report.json"
        assert main(["eval", "--meeting", str(meeting), "--out", str(out)]) == 0
        assert "micro" in json.loads(out.read_text(encoding="utf-8"))


class TestGrid:
    def test_search_to_file(self, tmp_path) -> None:
        data = tmp_path / "data"
        for k in range(2):
            bundle, gold = shuffled_verbosity_meeting(f"g{k}")
            write_meeting_dir(data, bundle, gold)
        space = tmp_path / "space.json"
        space.write_text(json.dumps({"scorer": ["rouge1", "tfidf"]}), encoding="utf-8")
        stages = tmp_path / "stages.json"
        stages.write_text(
            json.dumps([{"meetings": ["g0", "g1"], "top_k": 2}]), encoding="utf-8"
        )
        out = tmp_path / "ranking.json"
        code = main(
            [
                "grid",
                "--space",
                str(space),
                "--stages",
                str(stages),
                "--data",
                str(data),
                "--out",
                str(out),
                "--cache",
                str(tmp_path / "cache"),
            ]
        )
        assert code == 0
        result = json.loads(out.read_text(encoding="utf-8"))
        assert result["metric"] == "windowdiff"
        assert len(result["ranking"]) == 2
        assert (tmp_path / "cache").is_dir()

    def test_malformed_stages_fail(self, tmp_path) -> None:
        space = tmp_path / "space.json"
        space.write_text(json.dumps({"scorer": ["rouge1"]}), encoding="utf-8")
        stages = tmp_path / "stages.json"
        stages.write_text(json.dumps([{"top_k": 1}]), encoding="utf-8")
        code = main(
            [
                "grid",
                "--space",
                str(space),
                "--stages",
                str(stages),
                "--data",
                str(tmp_path),
                "--out",
                str(tmp_path / "r.json"),
            ]
        )
        assert code == 1


class TestExtract:
    def test_single_jsonl(self, tmp_path) -> None:
        data = tmp_path / "data"
        for k in range(2):
            bundle, gold = shuffled_verbosity_meeting(f"e{k}")
            write_meeting_dir(data, bundle, gold)
        out = tmp_path / "pairs.jsonl"
        code = main(
            [
                "extract",
                "--meeting",
                str(data / "e0"),
                "--meeting",
                str(data / "e1"),
                "--out",
                str(out),
                "--min-words",
                "1",
                "--min-sentences",
                "1",
            ]
        )
        assert code == 0
        rows = [
            json.loads(line)
            for line in out.read_text(encoding="utf-8").strip().split("\n")
        ]
        assert {r["meeting_id"] for r in rows} == {"e0", "e1"}

    def test_split_by_meeting(self, tmp_path) -> None:
        data = tmp_path / "data"
        for k in range(2):
            bundle, gold = shuffled_verbosity_meeting(f"s{k}")
            write_meeting_dir(data, bundle, gold)
        out = tmp_path / "pairs"
        code = main(
            [
                "extract",
                "--meeting",
                str(data / "s0"),
                "--meeting",
                str(data / "s1"),
                "--out",
                str(out),
                "--split-by-meeting",
                "--min-words",
                "1",
                "--min-sentences",
                "1",
            ]
        )
        assert code == 0
        assert sorted(p.name for p in out.iterdir()) == ["s0.jsonl", "s1.jsonl"]

    def test_strict_filter_yields_empty_file(self, meeting, tmp_path) -> None:
        out = tmp_path / "pairs.jsonl"
        code = main(
            [
                "extract",
                "--meeting",
                str(meeting),
                "--out",
                str(out),
                "--min-words",
                "500",
                "--max-words",
                "600",
            ]
        )
        assert code == 0
        assert out.read_text(encoding="utf-8") == ""


class TestServe:
    def test_fails_fast_without_embeddings(self, meeting, tmp_path, monkeypatch) -> None:
        monkeypatch.delenv("ALIGNSUM_EMBEDDINGS", raising=False)
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"scorer": "embedding"}), encoding="utf-8")
        code = main(
            [
                "serve",
                "--data",
                str(meeting.parent),
                "--config",
                str(config),
            ]
        )
        assert code == 1
