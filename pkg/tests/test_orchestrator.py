"""Postprocessing rules and end-to-end fixture runs against the stub."""

import csv
import json

import pytest

from polyeval.langid.tags import LanguageTag
from polyeval.orchestrator import (
    NoBenchmarkMatched,
    emit_reports,
    postprocess,
    postprocess_tags,
    run,
)
from polyeval.orchestrator.config import RunConfig
from polyeval.promptlib.templates import PromptStrategy


class TestPostprocess:
    def test_blank_line_cut(self):
        assert postprocess(" Bonjour.\n\nExtra", "Translation") == "Bonjour."

    def test_stop_marker_then_strip(self):
        assert postprocess("result text ###ignored", "Translation", stop=["###"]) == "result text"

    @pytest.mark.parametrize(
        "raw,want",
        [
            ("The answer is (B).", "B"),
            ("A", "A"),
            ("answer: c)", "C"),
            ("[d] is right", "D"),
            ("I think B. because...", "B"),
            ("no option here", None),
            ("ABCD run together", None),
            ("option E", None),
        ],
    )
    def test_option_letter_extraction(self, raw, want):
        assert postprocess(raw, "Comprehension") == want

    def test_tags_padded_and_cut(self):
        assert postprocess_tags("B-PER O", 4) == ["B-PER", "O", "O", "O"]
        assert postprocess_tags("O O O O O", 3) == ["O", "O", "O"]


class TestRun:
    def test_unknown_benchmark_id(self, golden_config):
        golden_config.benchmarks = ["nope"]
        with pytest.raises(NoBenchmarkMatched):
            run(golden_config)

    def test_no_language_match(self, golden_config):
        golden_config.langs = ["fin_Latn"]
        with pytest.raises(NoBenchmarkMatched):
            run(golden_config)

    def test_zho_query_selects_cmn_subset(self, golden_config):
        """A macrolanguage query pulls in the cmn_Hans classification subset."""
        golden_config.benchmarks = ["toyclass"]
        golden_config.langs = ["zho"]
        summary = run(golden_config)
        assert summary.ok
        names = [s.name for b in summary.benchmarks for s in b.subsets]
        assert names == ["cmn_Hans"]

    def test_zho_query_across_benchmarks(self, golden_config):
        golden_config.langs = ["zho", "spa"]
        summary = run(golden_config)
        by_bench = {b.id: [s.name for s in b.subsets] for b in summary.benchmarks}
        assert by_bench["toyclass"] == ["cmn_Hans", "spa_Latn"]
        # translation: only directions touching zho_Hans survive the filter
        assert all("zho_Hans" in n for n in by_bench["toytrans"])

    def test_completeness_accounting(self, golden_config):
        summary = run(golden_config)
        assert summary.ok
        for benchmark in summary.benchmarks:
            for subset in benchmark.subsets:
                assert len(subset.records) == subset.n_samples
                if benchmark.task_kind == "Intrinsic":
                    assert subset.n_shot_used == 0
                    assert subset.n_samples == 6  # min(limit, size), no reservation
                else:
                    assert subset.n_samples == 6 - golden_config.n_shot

    def test_pivot_symmetry(self, golden_config):
        golden_config.benchmarks = ["toytrans"]
        for mode, count in (("AnyToPivot", 3), ("PivotToAny", 3), ("Both", 6)):
            golden_config.direction_mode = mode
            summary = run(golden_config)
            assert len(summary.benchmarks[0].subsets) == count
        both = {s.name for s in summary.benchmarks[0].subsets}
        golden_config.direction_mode = "AnyToPivot"
        a = {s.name for s in run(golden_config).benchmarks[0].subsets}
        golden_config.direction_mode = "PivotToAny"
        b = {s.name for s in run(golden_config).benchmarks[0].subsets}
        assert both == a | b and not a & b

    def test_strategy_equivalence_on_english_subsets(self, golden_config):
        golden_config.benchmarks = ["toytrans"]
        golden_config.direction_mode = "PivotToAny"  # all sources are eng_Latn
        multi = run(golden_config)
        golden_config.prompt_strategy = PromptStrategy("single", LanguageTag("eng", "Latn"))
        single = run(golden_config)
        p_multi = [r.prompt for r in multi.all_records()]
        p_single = [r.prompt for r in single.all_records()]
        assert p_multi == p_single

    def test_single_finnish_prompting_everywhere(self, golden_config):
        golden_config.benchmarks = ["toytrans"]
        golden_config.prompt_strategy = PromptStrategy("single", LanguageTag("fin", "Latn"))
        summary = run(golden_config)
        for subset in summary.benchmarks[0].subsets:
            assert subset.prompt_language == "fin_Latn"
            assert not subset.used_fallback_prompt
        for record in summary.all_records():
            assert "Käännä seuraava lause" in record.prompt

    def test_multi_fallback_flag_set(self, golden_config):
        golden_config.benchmarks = ["toytrans"]
        summary = run(golden_config)
        by_name = {s.name: s for s in summary.benchmarks[0].subsets}
        zho_source = by_name["zho_Hans->eng_Latn"]
        assert zho_source.used_fallback_prompt
        assert zho_source.prompt_language == "eng_Latn"
        assert summary.benchmarks[0].prompt_fallback_count == 1

    def test_partial_failure_does_not_abort_run(self, golden_config, tmp_path, fixtures_dir):
        import shutil

        shutil.copytree(fixtures_dir / "benchmarks", tmp_path / "benchmarks")
        shutil.copytree(fixtures_dir / "data", tmp_path / "data")
        broken = tmp_path / "benchmarks" / "toylm.benchmark.json"
        data = json.loads(broken.read_text())
        data["root_path"] = str(tmp_path / "missing")
        broken.write_text(json.dumps(data))
        golden_config.registry_dir = tmp_path / "benchmarks"
        summary = run(golden_config)
        by_id = {b.id: b for b in summary.benchmarks}
        assert by_id["toylm"].error is not None
        assert by_id["toytrans"].error is None and by_id["toytrans"].subsets
        assert not summary.ok

    def test_all_fixture_benchmarks_run_clean(self, golden_config):
        golden_config.benchmarks = ["all"]
        golden_config.n_shot = 0
        summary = run(golden_config)
        assert summary.ok, [(b.id, b.error) for b in summary.benchmarks]
        assert {b.id for b in summary.benchmarks} == {
            "toytrans", "toyclass", "toycomp", "toylm", "toytags", "toypair",
            "toysum", "toygen", "toygender",
        }

    def test_gender_split_reported(self, golden_config):
        golden_config.benchmarks = ["toygender"]
        golden_config.n_shot = 0
        summary = run(golden_config)
        report = summary.benchmarks[0].subsets[0].metrics["chrf_gender"]
        assert set(report.subgroup_scores) == {"Masculine", "Feminine", "delta"}


class TestEmitReports:
    def test_files_written(self, golden_config):
        summary = run(golden_config)
        files = emit_reports(summary)
        assert files["summary"].is_file()
        assert files["scores"].is_file()
        assert files["details"].is_file()

    def test_store_details_off(self, golden_config):
        golden_config.store_details = False
        summary = run(golden_config)
        files = emit_reports(summary)
        assert "details" not in files
        assert not (golden_config.output_dir / "details.jsonl").exists()

    def test_scores_csv_cardinality(self, golden_config):
        golden_config.benchmarks = ["toytrans"]
        golden_config.direction_mode = "AnyToPivot"
        summary = run(golden_config)
        emit_reports(summary)
        with (golden_config.output_dir / "scores.csv").open() as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 6  # 3 directions x 2 metrics

    def test_throughput_cell_format(self, golden_config):
        import re

        summary = run(golden_config)
        emit_reports(summary)
        data = json.loads((golden_config.output_dir / "summary.json").read_text())
        cells = [
            s["throughput"]["cell"]
            for b in data["benchmarks"]
            for s in b["subsets"]
            if "throughput" in s
        ]
        assert cells
        for cell in cells:
            assert re.fullmatch(r"\d+ / \d+\.\d{2} = \d+\.\d{2}", cell)

    def test_details_fields(self, golden_config):
        summary = run(golden_config)
        files = emit_reports(summary)
        rows = [json.loads(x) for x in files["details"].read_text().splitlines()]
        assert len(rows) == 57
        for row in rows:
            assert list(row) == [
                "benchmark_id",
                "sample_index",
                "subset",
                "prompt",
                "raw_output",
                "postprocessed_output",
                "references",
                "per_metric_scores",
                "used_fallback_prompt",
                "wall_time",
            ]


class TestCli:
    def test_run_roundtrip(self, tmp_path, fixtures_dir, capsys):
        from polyeval.cli import main

        code = main(
            [
                "run",
                "--config",
                str(fixtures_dir / "run_golden.json"),
                "--out",
                str(tmp_path / "out"),
            ]
        )
        assert code == 0
        assert (tmp_path / "out" / "summary.json").is_file()

    def test_run_unknown_benchmark_exits_nonzero(self, tmp_path, fixtures_dir, capsys):
        from polyeval.cli import main

        code = main(
            [
                "run",
                "--config",
                str(fixtures_dir / "run_golden.json"),
                "--benchmarks",
                "doesnotexist",
                "--out",
                str(tmp_path / "out"),
            ]
        )
        assert code == 2

    def test_align_command(self, tmp_path, fixtures_dir, capsys, monkeypatch):
        from polyeval.cli import main

        monkeypatch.chdir(tmp_path)
        code = main(
            ["align", "--benchmark", "toytrans", "--registry", str(fixtures_dir / "benchmarks")]
        )
        assert code == 0
        rows = [json.loads(x) for x in (tmp_path / "alignment_toytrans.jsonl").read_text().splitlines()]
        assert len(rows) == 4
        assert {r["source_label"] for r in rows} == {"en", "fr", "de", "zho-CN"}

    def test_propagate_command(self, tmp_path, fixtures_dir):
        import shutil

        from polyeval.cli import main

        lib_dir = tmp_path / "prompts"
        shutil.copytree(fixtures_dir / "prompts", lib_dir)
        code = main(
            [
                "prompts",
                "propagate",
                "--task",
                "Translation",
                "--from",
                "eng_Latn",
                "--to",
                "vie_Latn,kor_Hang",
                "--library",
                str(lib_dir),
            ]
        )
        assert code == 0
        data = json.loads((lib_dir / "Translation.json").read_text())
        assert data["vie_Latn"]["provenance"] == "machine-translated"
        assert "{src_text}" in data["kor_Hang"]["instruction"]

    def test_env_var_backend_override(self, golden_config, monkeypatch):
        monkeypatch.setenv("POLYEVAL_BACKEND_URL", "stub:echo")
        golden_config.backend_url = "http://127.0.0.1:9"  # dead; env must win
        summary = run(golden_config)
        assert summary.ok
