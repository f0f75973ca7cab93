"""Pure scoring kernels and the metric-id registry."""

from __future__ import annotations

from dataclasses import dataclass

from polyeval.metrics.bleu import TooFewOutputs, bleu, self_bleu
from polyeval.metrics.chrf import chrf, chrf_by_gender
from polyeval.metrics.classification import classification_scores
from polyeval.metrics.nll import aggregate_nll
from polyeval.metrics.report import (
    BleuConfig,
    ChrfConfig,
    EmptyCorpus,
    LengthMismatch,
    MetricConfig,
    RougeConfig,
    ScoreReport,
    signature,
)
from polyeval.metrics.rouge import rouge
from polyeval.metrics.spans import TagLengthMismatch, decode_bio, span_f1, token_accuracy
from polyeval.metrics.tokenizers import (
    SubwordTokenizer,
    get_tokenizer,
    load_subword_tokenizer,
    register_tokenizer,
)


@dataclass(frozen=True)
class MetricSpec:
    metric_id: str
    task_kinds: tuple[str, ...]
    external: bool = False  # scored outside the run, merged back by sample index


# Every metric id a benchmark descriptor may reference.
METRIC_REGISTRY: dict[str, MetricSpec] = {
    spec.metric_id: spec
    for spec in [
        MetricSpec("bleu", ("Translation",)),
        MetricSpec("chrf", ("Translation",)),
        MetricSpec("chrf++", ("Translation",)),
        MetricSpec("chrf_gender", ("Translation",)),
        MetricSpec("rouge", ("Summarization",)),
        MetricSpec("accuracy", ("Classification", "Comprehension")),
        MetricSpec("macro_f1", ("Classification",)),
        MetricSpec("span_f1", ("TokenClassification",)),
        MetricSpec("token_accuracy", ("TokenClassification",)),
        MetricSpec("self_bleu", ("OpenGeneration",)),
        MetricSpec("nll", ("Intrinsic",)),
        MetricSpec("comet", ("Translation",), external=True),
    ]
}


def known_metric(metric_id: str) -> bool:
    return metric_id in METRIC_REGISTRY


__all__ = [
    "METRIC_REGISTRY",
    "MetricSpec",
    "known_metric",
    "MetricConfig",
    "BleuConfig",
    "ChrfConfig",
    "RougeConfig",
    "ScoreReport",
    "signature",
    "bleu",
    "self_bleu",
    "chrf",
    "chrf_by_gender",
    "rouge",
    "classification_scores",
    "span_f1",
    "token_accuracy",
    "decode_bio",
    "aggregate_nll",
    "get_tokenizer",
    "register_tokenizer",
    "load_subword_tokenizer",
    "SubwordTokenizer",
    "LengthMismatch",
    "EmptyCorpus",
    "TagLengthMismatch",
    "TooFewOutputs",
]
