"""Corpus NLL aggregation and the derived perplexity."""

from __future__ import annotations

import math
from typing import Sequence

from polyeval.metrics.report import EmptyCorpus, LengthMismatch, MetricConfig, ScoreReport


def aggregate_nll(
    per_window_nlls: Sequence[float],
    token_counts: Sequence[int],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """Total corpus NLL over scored windows, with PPL = exp(NLL / n_tokens).

    NLL is the comparison metric (robust to tokenizer granularity); PPL is
    exported as a derived field only.
    """
    config = config or MetricConfig(metric_id="nll")
    if len(per_window_nlls) != len(token_counts):
        raise LengthMismatch(f"{len(per_window_nlls)} NLLs vs {len(token_counts)} token counts")
    total_tokens = sum(token_counts)
    if total_tokens <= 0:
        raise EmptyCorpus("no scored tokens")
    total = float(sum(per_window_nlls))
    return ScoreReport(
        metric_id="nll",
        corpus_score=total,
        subgroup_scores={"nll": total, "ppl": math.exp(total / total_tokens)},
        config_echo=config,
        notes={"scored_tokens": total_tokens},
    )
