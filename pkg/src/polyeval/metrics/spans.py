"""Span-level F1 over BIO tag sequences, plus token accuracy for POS-style sets."""

from __future__ import annotations

from typing import Sequence

from polyeval.errors import PolyevalError
from polyeval.metrics.report import EmptyCorpus, LengthMismatch, MetricConfig, ScoreReport


class TagLengthMismatch(PolyevalError):
    pass


Span = tuple[str, int, int]  # (type, start, end) with end exclusive


def decode_bio(tags: Sequence[str]) -> tuple[list[Span], int]:
    """Decode BIO tags into typed spans.

    Lenient repair: an I-X with no live span of type X opens a new span
    (treated as B-X), and anything that is not B-/I-/O at all is read as O.
    Returns (spans, repair_count).
    """
    spans: list[Span] = []
    repairs = 0
    start = None
    span_type = None
    for i, tag in enumerate(tags):
        if tag.startswith("B-"):
            if start is not None:
                spans.append((span_type, start, i))
            start, span_type = i, tag[2:]
        elif tag.startswith("I-"):
            if start is None or tag[2:] != span_type:
                if start is not None:
                    spans.append((span_type, start, i))
                start, span_type = i, tag[2:]
                repairs += 1
        else:
            if tag != "O":
                repairs += 1
            if start is not None:
                spans.append((span_type, start, i))
                start = None
    if start is not None:
        spans.append((span_type, start, len(tags)))
    return spans, repairs


def span_f1(
    pred_tag_seqs: Sequence[Sequence[str]],
    gold_tag_seqs: Sequence[Sequence[str]],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """Micro-F1 over exact (type, start, end) span matches.

    Repaired malformed tags are counted in ``notes["bio_repairs"]``.
    """
    config = config or MetricConfig(metric_id="span_f1")
    if len(pred_tag_seqs) != len(gold_tag_seqs):
        raise LengthMismatch(f"{len(pred_tag_seqs)} predicted vs {len(gold_tag_seqs)} gold sentences")
    if not gold_tag_seqs:
        raise EmptyCorpus("no tag sequences")
    tp = fp = fn = 0
    repairs = 0
    for pred, gold in zip(pred_tag_seqs, gold_tag_seqs):
        if len(pred) != len(gold):
            raise TagLengthMismatch(f"sentence lengths differ: {len(pred)} vs {len(gold)}")
        pred_spans, r1 = decode_bio(pred)
        gold_spans, r2 = decode_bio(gold)
        repairs += r1 + r2
        pred_set = set(pred_spans)
        gold_set = set(gold_spans)
        tp += len(pred_set & gold_set)
        fp += len(pred_set - gold_set)
        fn += len(gold_set - pred_set)
    denom = 2 * tp + fp + fn
    f1 = (2 * tp / denom) if denom else 1.0  # no spans anywhere = vacuous success
    notes: dict[str, object] = {"tp": tp, "fp": fp, "fn": fn}
    if repairs:
        notes["bio_repairs"] = repairs
    return ScoreReport(metric_id="span_f1", corpus_score=f1, config_echo=config, notes=notes)


def token_accuracy(
    pred_tag_seqs: Sequence[Sequence[str]],
    gold_tag_seqs: Sequence[Sequence[str]],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """Flat per-token accuracy; the span-free mode for POS-style benchmarks."""
    config = config or MetricConfig(metric_id="token_accuracy")
    if len(pred_tag_seqs) != len(gold_tag_seqs):
        raise LengthMismatch(f"{len(pred_tag_seqs)} predicted vs {len(gold_tag_seqs)} gold sentences")
    if not gold_tag_seqs:
        raise EmptyCorpus("no tag sequences")
    correct = total = 0
    for pred, gold in zip(pred_tag_seqs, gold_tag_seqs):
        if len(pred) != len(gold):
            raise TagLengthMismatch(f"sentence lengths differ: {len(pred)} vs {len(gold)}")
        correct += sum(1 for p, g in zip(pred, gold) if p == g)
        total += len(gold)
    if total == 0:
        raise EmptyCorpus("no tokens")
    return ScoreReport(metric_id="token_accuracy", corpus_score=correct / total, config_echo=config)
