"""summary.json, details.jsonl, and scores.csv emission."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from polyeval.errors import PolyevalError
from polyeval.inference.throughput import format_cell
from polyeval.orchestrator.config import RunConfig
from polyeval.orchestrator.run import RunSummary, SubsetResult


class OutputDirNotWritable(PolyevalError):
    pass


def _subset_dict(subset: SubsetResult, store_per_sample: bool) -> dict:
    out: dict = {
        "name": subset.name,
        "prompt_language": subset.prompt_language,
        "used_fallback_prompt": subset.used_fallback_prompt,
        "n_shot": subset.n_shot_used,
        "n_samples": subset.n_samples,
        "metrics": {
            metric_id: report.to_json_dict(include_per_sample=store_per_sample)
            for metric_id, report in sorted(subset.metrics.items())
        },
    }
    if subset.wall_time > 0:
        out["throughput"] = {
            "tokens": subset.tokens,
            "wall_time": round(subset.wall_time, 6),
            "tokens_per_second": round(subset.tokens / subset.wall_time, 6),
            "cell": format_cell(subset.tokens, subset.wall_time),
        }
    if subset.extra:
        out.update(subset.extra)
    return out


def summary_dict(summary: RunSummary) -> dict:
    return {
        "config": summary.config.echo_dict(),
        "benchmarks": [
            {
                "id": b.id,
                "task_kind": b.task_kind,
                "error": b.error,
                "prompt_fallback_count": b.prompt_fallback_count,
                "subsets": [_subset_dict(s, store_per_sample=False) for s in b.subsets],
            }
            for b in summary.benchmarks
        ],
    }


def emit_reports(summary: RunSummary, config: RunConfig | None = None) -> dict[str, Path]:
    """Write summary.json, scores.csv, and (optionally) details.jsonl.

    Output is fully deterministic for a deterministic-timing run: key
    order is fixed, floats are rounded, and rows follow evaluation order.
    """
    config = config or summary.config
    out_dir = Path(config.output_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        raise OutputDirNotWritable(f"cannot write to {out_dir}: {exc}") from exc

    files: dict[str, Path] = {}

    summary_path = out_dir / "summary.json"
    summary_path.write_text(
        json.dumps(summary_dict(summary), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    files["summary"] = summary_path

    csv_path = out_dir / "scores.csv"
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["benchmark", "subset", "metric", "value"])
        for b in summary.benchmarks:
            for s in b.subsets:
                for metric_id, report in sorted(s.metrics.items()):
                    value = "" if math.isnan(report.corpus_score) else round(report.corpus_score, 6)
                    writer.writerow([b.id, s.name, metric_id, value])
    files["scores"] = csv_path

    if config.store_details:
        details_path = out_dir / "details.jsonl"
        with details_path.open("w", encoding="utf-8") as fh:
            for record in summary.all_records():
                fh.write(json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n")
        files["details"] = details_path

    return files
