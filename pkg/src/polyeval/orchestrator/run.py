"""The evaluation loop: selection, alignment, inference, scoring."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from polyeval.errors import PolyevalError
from polyeval.inference.client import WireClient, client_for_url, processed_tokens, run_batch
from polyeval.inference.nll import compute_nll
from polyeval.inference.wire import make_request
from polyeval.langid.align import align_benchmark, match_query
from polyeval.langid.iso_table import IsoTable, load_default_table
from polyeval.langid.tags import LanguageTag
from polyeval.metrics import (
    METRIC_REGISTRY,
    MetricConfig,
    ScoreReport,
    aggregate_nll,
    bleu,
    chrf,
    chrf_by_gender,
    classification_scores,
    rouge,
    self_bleu,
    span_f1,
    token_accuracy,
)
from polyeval.orchestrator.config import RunConfig
from polyeval.orchestrator.postprocess import postprocess, postprocess_tags
from polyeval.promptlib.templates import (
    PromptLibrary,
    PromptTemplate,
    parse_placeholders,
    render_prompt,
    select_template,
)
from polyeval.registry.descriptors import BenchmarkDescriptor
from polyeval.registry.directions import Direction, declared_directions, enumerate_directions
from polyeval.registry.samples import Sample, load_direction_samples, load_samples


class NoBenchmarkMatched(PolyevalError):
    pass


class BackendUnavailable(PolyevalError):
    pass


@dataclass
class EvalRecord:
    """One scored sample, exported as a details.jsonl row."""

    benchmark_id: str
    sample_index: int
    subset: str  # direction ("src->tgt") or tag
    prompt: str | None
    raw_output: str | None
    postprocessed_output: str | None
    references: list[str]
    per_metric_scores: dict[str, float]
    used_fallback_prompt: bool
    wall_time: float

    def to_json_dict(self) -> dict:
        return {
            "benchmark_id": self.benchmark_id,
            "sample_index": self.sample_index,
            "subset": self.subset,
            "prompt": self.prompt,
            "raw_output": self.raw_output,
            "postprocessed_output": self.postprocessed_output,
            "references": self.references,
            "per_metric_scores": {k: round(v, 6) for k, v in self.per_metric_scores.items()},
            "used_fallback_prompt": self.used_fallback_prompt,
            "wall_time": round(self.wall_time, 6),
        }


@dataclass
class SubsetResult:
    name: str
    prompt_language: str | None
    used_fallback_prompt: bool
    n_shot_used: int
    n_samples: int
    metrics: dict[str, ScoreReport] = field(default_factory=dict)
    tokens: int = 0
    wall_time: float = 0.0
    records: list[EvalRecord] = field(default_factory=list)
    extra: dict = field(default_factory=dict)


@dataclass
class BenchmarkResult:
    id: str
    task_kind: str
    subsets: list[SubsetResult] = field(default_factory=list)
    error: str | None = None

    @property
    def prompt_fallback_count(self) -> int:
        return sum(1 for s in self.subsets if s.used_fallback_prompt)


@dataclass
class RunSummary:
    config: RunConfig
    benchmarks: list[BenchmarkResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return bool(self.benchmarks) and all(b.error is None for b in self.benchmarks)

    def all_records(self) -> list[EvalRecord]:
        return [r for b in self.benchmarks for s in b.subsets for r in s.records]


# ---------------------------------------------------------------------------
# alignment plumbing


def _raw_lines(descriptor: BenchmarkDescriptor, label: str) -> list[str]:
    """Raw text lines of a subset, for script detection."""
    if descriptor.data_format == "ParallelPerLanguageFiles":
        path = descriptor.root_path / f"{label}.txt"
        return path.read_text(encoding="utf-8").splitlines()
    if descriptor.data_format == "JsonlRecords":
        path = descriptor.root_path / f"{label}.jsonl"
        key = descriptor.field_map.get("input_text", "input_text")
        lines = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                lines.append(str(json.loads(line).get(key, "")))
        return lines
    path = descriptor.root_path / f"{label}.tsv"
    lines = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            lines.append(line.split("\t")[0])
    return lines


def ensure_aligned(descriptor: BenchmarkDescriptor, table: IsoTable, seed: int):
    """Fill descriptor.lang_dict via label resolution + script detection."""
    if descriptor.lang_dict:
        return []
    aligned, report = align_benchmark(
        descriptor, lambda label: _raw_lines(descriptor, label), table=table, seed=seed
    )
    descriptor.lang_dict = aligned
    return report


# ---------------------------------------------------------------------------
# prompt plumbing


def _display_name(table: IsoTable, tag: LanguageTag) -> str:
    row = table.get(tag.language)
    return row.reference_name if row else tag.language


def _bind(text: str, available: dict[str, str]) -> dict[str, str]:
    """Exact bindings for the placeholders a template body actually uses."""
    return {name: available[name] for name in parse_placeholders(text) if name in available}


def _render(template: PromptTemplate, available: dict[str, str], demos: list[dict[str, str]]) -> str:
    fewshot = None
    if demos and template.fewshot_item:
        fewshot = [_bind(template.fewshot_item, d) for d in demos]
    return render_prompt(template, _bind(template.instruction, available), fewshot)


def _generate_batch(
    client: WireClient,
    prompts: list[str],
    descriptor: BenchmarkDescriptor,
    parallelism: int,
) -> list[tuple[str, int, float]]:
    """(stop-verified output, token count, wall time) per prompt, in order."""
    payloads = [
        make_request(
            "Generate", prompt=p, max_new_tokens=descriptor.max_new_tokens, stop=list(descriptor.stop)
        )
        for p in prompts
    ]
    out = []
    for response, wall in run_batch(client, payloads, parallelism):
        text = response["output_text"]
        for marker in descriptor.stop:
            idx = text.find(marker)
            if idx != -1:
                text = text[:idx]
        out.append((text, response["generated_token_count"], wall))
    return out


def _pick_label(logits: list[float], sums: list[float]) -> int:
    best = max(logits)
    tied = [i for i, v in enumerate(logits) if v == best]
    if len(tied) > 1:
        best_sum = max(sums[i] for i in tied)
        tied = [i for i in tied if sums[i] == best_sum]
    return tied[0]


def _split_shots(samples: list[Sample], n_shot: int) -> tuple[list[Sample], list[Sample]]:
    return samples[:n_shot], samples[n_shot:]


def _sentence_score(metric_id: str, hyp: str, ref: str) -> float:
    if metric_id == "bleu":
        return bleu([hyp], [ref]).corpus_score
    cfg = MetricConfig(metric_id=metric_id)
    if metric_id == "chrf++":
        cfg.chrf.word_order = 2
    return chrf([hyp], [ref], cfg).corpus_score


def _translation_reports(
    metric_ids: list[str],
    hyps: list[str],
    refs: list[str],
    genders: list[str | None],
) -> dict[str, ScoreReport]:
    reports: dict[str, ScoreReport] = {}
    for metric_id in metric_ids:
        if metric_id == "bleu":
            reports[metric_id] = bleu(hyps, refs)
        elif metric_id == "chrf":
            reports[metric_id] = chrf(hyps, refs)
        elif metric_id == "chrf++":
            cfg = MetricConfig(metric_id="chrf++")
            cfg.chrf.word_order = 2
            reports[metric_id] = chrf(hyps, refs, cfg)
        elif metric_id == "chrf_gender":
            rows = [(h, r, g) for h, r, g in zip(hyps, refs, genders) if g]
            if not rows:
                raise PolyevalError("chrf_gender requires gender-marked samples")
            reports[metric_id] = chrf_by_gender(rows)
        elif METRIC_REGISTRY[metric_id].external:
            reports[metric_id] = ScoreReport(
                metric_id=metric_id,
                corpus_score=float("nan"),
                notes={"external": "score the per-sample export out-of-repo and merge by sample_index"},
            )
        else:
            raise PolyevalError(f"metric {metric_id!r} does not apply to translation")
    return reports


# ---------------------------------------------------------------------------
# per-task evaluation


def _eval_translation_direction(
    descriptor: BenchmarkDescriptor,
    direction: Direction,
    config: RunConfig,
    client: WireClient,
    library: PromptLibrary,
    table: IsoTable,
) -> SubsetResult:
    samples = load_direction_samples(descriptor, direction.source, direction.target, config.sample_limit)
    demos, scored = _split_shots(samples, config.n_shot)
    template, fallback = select_template(library, config.prompt_strategy, "Translation", direction.source)

    demo_binds = [
        {
            "src_text": d.input_text,
            "tgt_text": d.references[0],
            "src_lang": _display_name(table, direction.source),
            "tgt_lang": _display_name(table, direction.target),
        }
        for d in demos
    ]
    prompts = [
        _render(
            template,
            {
                "src_text": s.input_text,
                "src_lang": _display_name(table, direction.source),
                "tgt_lang": _display_name(table, direction.target),
            },
            demo_binds,
        )
        for s in scored
    ]
    result = SubsetResult(
        name=str(direction),
        prompt_language=str(template.tag),
        used_fallback_prompt=fallback,
        n_shot_used=len(demos),
        n_samples=len(scored),
    )
    if not scored:
        return result

    outputs = _generate_batch(client, prompts, descriptor, config.parallelism)
    hyps = [postprocess(text, "Translation", descriptor.stop) for text, _, _ in outputs]
    refs = [s.references[0] for s in scored]
    genders = [s.gender for s in scored]
    result.metrics = _translation_reports(descriptor.metrics, hyps, refs, genders)
    for s, (raw, tokens, wall), hyp in zip(scored, outputs, hyps):
        per_metric = {
            m: _sentence_score(m, hyp, s.references[0])
            for m in descriptor.metrics
            if m in ("bleu", "chrf", "chrf++")
        }
        result.tokens += tokens
        result.wall_time += wall
        result.records.append(
            EvalRecord(
                benchmark_id=descriptor.id,
                sample_index=s.index,
                subset=str(direction),
                prompt=prompts[len(result.records)],
                raw_output=raw,
                postprocessed_output=hyp,
                references=s.references,
                per_metric_scores=per_metric,
                used_fallback_prompt=fallback,
                wall_time=wall,
            )
        )
    return result


def _eval_translation_jsonl(
    descriptor: BenchmarkDescriptor,
    tag: LanguageTag,
    config: RunConfig,
    client: WireClient,
    library: PromptLibrary,
    table: IsoTable,
) -> SubsetResult:
    """Translation subsets stored as JSONL records (source + references [+ gender])."""
    samples = load_samples(descriptor, tag, config.sample_limit)
    demos, scored = _split_shots(samples, config.n_shot)
    template, fallback = select_template(library, config.prompt_strategy, "Translation", tag)
    demo_binds = [
        {"src_text": d.input_text, "tgt_text": d.references[0] if d.references else ""} for d in demos
    ]
    prompts = [
        _render(template, {"src_text": s.input_text, "src_lang": _display_name(table, tag)}, demo_binds)
        for s in scored
    ]
    result = SubsetResult(
        name=str(tag),
        prompt_language=str(template.tag),
        used_fallback_prompt=fallback,
        n_shot_used=len(demos),
        n_samples=len(scored),
    )
    if not scored:
        return result
    outputs = _generate_batch(client, prompts, descriptor, config.parallelism)
    hyps = [postprocess(text, "Translation", descriptor.stop) for text, _, _ in outputs]
    refs = [s.references[0] for s in scored]
    genders = [s.gender for s in scored]
    result.metrics = _translation_reports(descriptor.metrics, hyps, refs, genders)
    for s, (raw, tokens, wall), hyp in zip(scored, outputs, hyps):
        per_metric = {
            m: _sentence_score(m, hyp, s.references[0])
            for m in descriptor.metrics
            if m in ("bleu", "chrf", "chrf++")
        }
        result.tokens += tokens
        result.wall_time += wall
        result.records.append(
            EvalRecord(
                benchmark_id=descriptor.id,
                sample_index=s.index,
                subset=str(tag),
                prompt=prompts[len(result.records)],
                raw_output=raw,
                postprocessed_output=hyp,
                references=s.references,
                per_metric_scores=per_metric,
                used_fallback_prompt=fallback,
                wall_time=wall,
            )
        )
    return result


def _eval_classification(
    descriptor: BenchmarkDescriptor,
    tag: LanguageTag,
    config: RunConfig,
    client: WireClient,
    library: PromptLibrary,
) -> SubsetResult:
    samples = load_samples(descriptor, tag, config.sample_limit)
    demos, scored = _split_shots(samples, config.n_shot)
    template, fallback = select_template(library, config.prompt_strategy, "Classification", tag)
    inventory = sorted({s.label for s in samples if s.label is not None})
    if not inventory:
        raise PolyevalError(f"{descriptor.id}/{tag}: no gold labels in subset")

    demo_binds = [{"text": d.input_text, "label": d.label or ""} for d in demos]
    available = {"categories": ", ".join(inventory)}
    prompts = [_render(template, {"text": s.input_text, **available}, demo_binds) for s in scored]
    result = SubsetResult(
        name=str(tag),
        prompt_language=str(template.tag),
        used_fallback_prompt=fallback,
        n_shot_used=len(demos),
        n_samples=len(scored),
    )
    if not scored:
        return result

    payloads = [make_request("ScoreChoices", prompt=p, choices=inventory) for p in prompts]
    responses = run_batch(client, payloads, config.parallelism)
    predictions = [
        inventory[_pick_label(resp["choice_logits"], resp["choice_logprob_sums"])]
        for resp, _ in responses
    ]
    gold = [s.label for s in scored]
    report = classification_scores(predictions, gold)
    for metric_id in descriptor.metrics:
        result.metrics[metric_id] = ScoreReport(
            metric_id=metric_id,
            corpus_score=report.subgroup_scores[metric_id]
            if metric_id in ("accuracy", "macro_f1")
            else report.corpus_score,
            subgroup_scores=report.subgroup_scores,
            config_echo=report.config_echo,
        )
    for s, prompt, prediction, (resp, wall) in zip(scored, prompts, predictions, responses):
        result.tokens += processed_tokens("ScoreChoices", resp)
        result.wall_time += wall
        result.records.append(
            EvalRecord(
                benchmark_id=descriptor.id,
                sample_index=s.index,
                subset=str(tag),
                prompt=prompt,
                raw_output=prediction,
                postprocessed_output=prediction,
                references=[s.label or ""],
                per_metric_scores={"accuracy": float(prediction == s.label)},
                used_fallback_prompt=fallback,
                wall_time=wall,
            )
        )
    return result


def _eval_generation(
    descriptor: BenchmarkDescriptor,
    tag: LanguageTag,
    config: RunConfig,
    client: WireClient,
    library: PromptLibrary,
) -> SubsetResult:
    """Comprehension, Summarization, and OpenGeneration subsets."""
    task = descriptor.task_kind
    samples = load_samples(descriptor, tag, config.sample_limit)
    demos, scored = _split_shots(samples, config.n_shot)
    template, fallback = select_template(library, config.prompt_strategy, task, tag)

    def demo_bind(d: Sample) -> dict[str, str]:
        return {
            "text": d.input_text,
            "question": d.input_text,
            "answer": d.label or "",
            "summary": d.references[0] if d.references else "",
        }

    demo_binds = [demo_bind(d) for d in demos]
    prompts = [_render(template, {"text": s.input_text, "question": s.input_text}, demo_binds) for s in scored]
    result = SubsetResult(
        name=str(tag),
        prompt_language=str(template.tag),
        used_fallback_prompt=fallback,
        n_shot_used=len(demos),
        n_samples=len(scored),
    )
    if not scored:
        return result

    outputs = _generate_batch(client, prompts, descriptor, config.parallelism)
    processed = [postprocess(text, task, descriptor.stop) for text, _, _ in outputs]

    per_sample_scores: list[dict[str, float]] = [{} for _ in scored]
    if task == "Comprehension":
        gold = [s.label for s in scored]
        predictions = [p if p is not None else "" for p in processed]
        report = classification_scores(predictions, gold)
        for metric_id in descriptor.metrics:
            result.metrics[metric_id] = ScoreReport(
                metric_id=metric_id,
                corpus_score=report.subgroup_scores.get(metric_id, report.corpus_score),
                subgroup_scores=report.subgroup_scores,
                config_echo=report.config_echo,
            )
        for i, (pred, g) in enumerate(zip(predictions, gold)):
            per_sample_scores[i]["accuracy"] = float(pred == g)
    elif task == "Summarization":
        refs = [s.references[0] for s in scored]
        hyps = [p or "" for p in processed]
        report = rouge(hyps, refs)
        result.metrics["rouge"] = report
        for i, (h, r) in enumerate(zip(hyps, refs)):
            one = rouge([h], [r])
            per_sample_scores[i].update({k: v for k, v in one.subgroup_scores.items()})
    else:  # OpenGeneration
        hyps = [p or "" for p in processed]
        report = self_bleu(hyps) if len(hyps) >= 2 else None
        if report is not None:
            result.metrics["self_bleu"] = report
            for i, v in enumerate(report.per_sample):
                per_sample_scores[i]["self_bleu"] = v

    for i, (s, (raw, tokens, wall)) in enumerate(zip(scored, outputs)):
        result.tokens += tokens
        result.wall_time += wall
        result.records.append(
            EvalRecord(
                benchmark_id=descriptor.id,
                sample_index=s.index,
                subset=str(tag),
                prompt=prompts[i],
                raw_output=raw,
                postprocessed_output=processed[i],
                references=list(s.references) if s.references else ([s.label] if s.label else []),
                per_metric_scores=per_sample_scores[i],
                used_fallback_prompt=fallback,
                wall_time=wall,
            )
        )
    return result


def _eval_token_classification(
    descriptor: BenchmarkDescriptor,
    tag: LanguageTag,
    config: RunConfig,
    client: WireClient,
    library: PromptLibrary,
) -> SubsetResult:
    samples = load_samples(descriptor, tag, config.sample_limit)
    demos, scored = _split_shots(samples, config.n_shot)
    template, fallback = select_template(library, config.prompt_strategy, "TokenClassification", tag)
    tagset = sorted({t for s in samples for t in (s.tags or [])})
    demo_binds = [
        {"tokens": " ".join(d.tokens or []), "tags": " ".join(d.tags or [])} for d in demos
    ]
    prompts = [
        _render(
            template,
            {"tokens": " ".join(s.tokens or []), "tagset": ", ".join(tagset)},
            demo_binds,
        )
        for s in scored
    ]
    result = SubsetResult(
        name=str(tag),
        prompt_language=str(template.tag),
        used_fallback_prompt=fallback,
        n_shot_used=len(demos),
        n_samples=len(scored),
    )
    if not scored:
        return result

    outputs = _generate_batch(client, prompts, descriptor, config.parallelism)
    pred_seqs = [
        postprocess_tags(text, len(s.tokens or [])) for (text, _, _), s in zip(outputs, scored)
    ]
    gold_seqs = [s.tags or [] for s in scored]
    for metric_id in descriptor.metrics:
        fn = span_f1 if metric_id == "span_f1" else token_accuracy
        result.metrics[metric_id] = fn(pred_seqs, gold_seqs)
    for i, (s, (raw, tokens, wall)) in enumerate(zip(scored, outputs)):
        per_metric = {}
        for metric_id in descriptor.metrics:
            fn = span_f1 if metric_id == "span_f1" else token_accuracy
            per_metric[metric_id] = fn([pred_seqs[i]], [gold_seqs[i]]).corpus_score
        result.tokens += tokens
        result.wall_time += wall
        result.records.append(
            EvalRecord(
                benchmark_id=descriptor.id,
                sample_index=s.index,
                subset=str(tag),
                prompt=prompts[i],
                raw_output=raw,
                postprocessed_output=" ".join(pred_seqs[i]),
                references=[" ".join(gold_seqs[i])],
                per_metric_scores=per_metric,
                used_fallback_prompt=fallback,
                wall_time=wall,
            )
        )
    return result


def _eval_intrinsic(
    descriptor: BenchmarkDescriptor,
    tag: LanguageTag,
    config: RunConfig,
    client: WireClient,
) -> SubsetResult:
    """Corpus NLL over the newline-concatenated subset (no prompts, no shots)."""
    samples = load_samples(descriptor, tag, config.sample_limit)
    result = SubsetResult(
        name=str(tag),
        prompt_language=None,
        used_fallback_prompt=False,
        n_shot_used=0,
        n_samples=len(samples),
        extra={"nll_window": config.nll_window, "nll_stride": config.nll_stride},
    )
    if not samples:
        return result
    corpus_text = "\n".join(s.input_text for s in samples)
    corpus = compute_nll(client, corpus_text, window=config.nll_window, stride=config.nll_stride)
    result.metrics["nll"] = aggregate_nll(corpus.per_window_nlls, corpus.scored_token_counts)
    result.tokens += corpus.token_count
    result.wall_time += corpus.wall_time
    for s in samples:
        one = compute_nll(client, s.input_text, window=config.nll_window, stride=config.nll_stride)
        ppl = aggregate_nll(one.per_window_nlls, one.scored_token_counts).subgroup_scores["ppl"]
        result.records.append(
            EvalRecord(
                benchmark_id=descriptor.id,
                sample_index=s.index,
                subset=str(tag),
                prompt=None,
                raw_output=None,
                postprocessed_output=None,
                references=[],
                per_metric_scores={"nll": one.total_nll, "ppl": ppl},
                used_fallback_prompt=False,
                wall_time=one.wall_time,
            )
        )
    return result


# ---------------------------------------------------------------------------
# top level


def _select_descriptors(registry: list[BenchmarkDescriptor], wanted: list[str]) -> list[BenchmarkDescriptor]:
    if wanted == ["all"]:
        if not registry:
            raise NoBenchmarkMatched("registry is empty")
        return registry
    by_id = {d.id: d for d in registry}
    missing = [w for w in wanted if w not in by_id]
    if missing:
        raise NoBenchmarkMatched(f"unknown benchmark ids: {missing}")
    return [by_id[w] for w in wanted]


def _subset_tags(descriptor: BenchmarkDescriptor, matched_labels: list[str] | None) -> list[LanguageTag]:
    tags = set(descriptor.lang_dict.values())
    if matched_labels is not None:
        tags &= {descriptor.lang_dict[label] for label in matched_labels}
    return sorted(tags, key=str)


def _evaluate_benchmark(
    descriptor: BenchmarkDescriptor,
    config: RunConfig,
    client: WireClient,
    library: PromptLibrary,
    table: IsoTable,
    matched_labels: list[str] | None,
) -> BenchmarkResult:
    result = BenchmarkResult(id=descriptor.id, task_kind=descriptor.task_kind)
    if not descriptor.lang_dict:
        raise PolyevalError(f"{descriptor.id}: no original label could be aligned")
    tags = _subset_tags(descriptor, matched_labels)

    if descriptor.task_kind == "Translation" and descriptor.data_format != "JsonlRecords":
        if descriptor.alignment_mode == "Pairwise":
            directions = declared_directions(descriptor)
        else:
            if config.pivot is None:
                raise PolyevalError(f"{descriptor.id}: multi-aligned translation needs a pivot")
            directions = enumerate_directions(descriptor, config.pivot, config.direction_mode)
        if matched_labels is not None:
            keep = set(tags)
            directions = [d for d in directions if d.source in keep or d.target in keep]
        for direction in directions:
            result.subsets.append(
                _eval_translation_direction(descriptor, direction, config, client, library, table)
            )
        return result

    for tag in tags:
        if descriptor.task_kind == "Translation":
            subset = _eval_translation_jsonl(descriptor, tag, config, client, library, table)
        elif descriptor.task_kind == "Classification":
            subset = _eval_classification(descriptor, tag, config, client, library)
        elif descriptor.task_kind == "TokenClassification":
            subset = _eval_token_classification(descriptor, tag, config, client, library)
        elif descriptor.task_kind == "Intrinsic":
            subset = _eval_intrinsic(descriptor, tag, config, client)
        else:
            subset = _eval_generation(descriptor, tag, config, client, library)
        result.subsets.append(subset)
    return result


def run(
    config: RunConfig,
    registry: list[BenchmarkDescriptor] | None = None,
    client: WireClient | None = None,
    backend_url: str | None = None,
) -> RunSummary:
    """Execute one evaluation run over the selected benchmarks and languages.

    A benchmark that fails mid-way records its error and the run continues
    with the rest; the summary's ``ok`` flag is the process exit signal.
    """
    from polyeval.registry.descriptors import load_registry

    table = load_default_table()
    if registry is None:
        registry = load_registry(config.registry_dir)
    selected = _select_descriptors(registry, config.benchmarks)

    if client is None:
        client = client_for_url(config.resolved_backend_url(backend_url), timing=config.timing)
    if not client.health_check():
        raise BackendUnavailable("backend health check failed")

    for descriptor in selected:
        ensure_aligned(descriptor, table, config.seed)

    matched: dict[str, list[str]] | None = None
    if config.langs:
        matched = match_query(config.langs, selected, table)
        selected = [d for d in selected if d.id in matched]
        if not selected:
            raise NoBenchmarkMatched(f"no benchmark subset matches languages {config.langs}")

    library = PromptLibrary.load(config.prompt_library_dir) if Path(config.prompt_library_dir).is_dir() else PromptLibrary()

    summary = RunSummary(config=config)
    for descriptor in selected:
        labels = matched.get(descriptor.id) if matched is not None else None
        try:
            summary.benchmarks.append(
                _evaluate_benchmark(descriptor, config, client, library, table, labels)
            )
        except PolyevalError as exc:
            summary.benchmarks.append(
                BenchmarkResult(id=descriptor.id, task_kind=descriptor.task_kind, error=str(exc))
            )
    return summary
