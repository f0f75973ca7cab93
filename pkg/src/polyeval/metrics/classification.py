"""Accuracy and macro-F1 for label classification."""

from __future__ import annotations

from typing import Sequence

from polyeval.metrics.report import EmptyCorpus, LengthMismatch, MetricConfig, ScoreReport


def classification_scores(
    predictions: Sequence[str],
    gold: Sequence[str],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """Exact-match accuracy plus unweighted mean F1 over gold classes.

    ``corpus_score`` is accuracy; ``subgroup_scores`` carries both values.
    Classes absent from gold (hallucinated predictions) count against
    precision of whatever they displaced but get no F1 term of their own.
    """
    config = config or MetricConfig(metric_id="classification")
    if len(predictions) != len(gold):
        raise LengthMismatch(f"{len(predictions)} predictions vs {len(gold)} gold labels")
    if not gold:
        raise EmptyCorpus("no labelled samples")

    hits = [float(p == g) for p, g in zip(predictions, gold)]
    accuracy = sum(hits) / len(gold)

    f1_sum = 0.0
    classes = sorted(set(gold))
    for cls in classes:
        tp = sum(1 for p, g in zip(predictions, gold) if p == cls and g == cls)
        fp = sum(1 for p, g in zip(predictions, gold) if p == cls and g != cls)
        fn = sum(1 for p, g in zip(predictions, gold) if p != cls and g == cls)
        denom = 2 * tp + fp + fn
        f1_sum += (2 * tp / denom) if denom else 0.0
    macro_f1 = f1_sum / len(classes)

    return ScoreReport(
        metric_id="classification",
        corpus_score=accuracy,
        per_sample=hits,
        subgroup_scores={"accuracy": accuracy, "macro_f1": macro_f1},
        config_echo=config,
    )
