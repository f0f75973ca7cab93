"""ROUGE-1/2/L with case-folded whitespace tokenization."""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from polyeval.metrics.report import EmptyCorpus, LengthMismatch, MetricConfig, ScoreReport


def _tokens(text: str) -> list[str]:
    return text.casefold().split()


def _f1(overlap: float, hyp_total: float, ref_total: float) -> float:
    if hyp_total == 0 or ref_total == 0:
        return 0.0
    precision = overlap / hyp_total
    recall = overlap / ref_total
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _ngram_f1(hyp: list[str], ref: list[str], n: int) -> float:
    h = Counter(tuple(hyp[i : i + n]) for i in range(len(hyp) - n + 1))
    r = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
    return _f1(sum((h & r).values()), sum(h.values()), sum(r.values()))


def _lcs_len(a: list[str], b: list[str]) -> int:
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge(
    hypotheses: Sequence[str],
    references: Sequence[str],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """ROUGE on the 0-1 scale: R1/R2 are n-gram overlap F1, RL is LCS F1.

    Per-sample scores are averaged for each variant's corpus value;
    ``corpus_score`` is rougeL, with all variants in ``subgroup_scores``.
    """
    config = config or MetricConfig(metric_id="rouge")
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise EmptyCorpus("no hypothesis/reference pairs")

    per_variant: dict[str, list[float]] = {v: [] for v in config.rouge.variants}
    for hyp_text, ref_text in zip(hypotheses, references):
        hyp = _tokens(hyp_text)
        ref = _tokens(ref_text)
        for variant in config.rouge.variants:
            if variant == "rouge1":
                score = _ngram_f1(hyp, ref, 1)
            elif variant == "rouge2":
                score = _ngram_f1(hyp, ref, 2)
            elif variant == "rougeL":
                score = _f1(_lcs_len(hyp, ref), len(hyp), len(ref))
            else:
                raise LengthMismatch(f"unknown ROUGE variant: {variant}")
            per_variant[variant].append(score)

    means = {v: sum(scores) / len(scores) for v, scores in per_variant.items()}
    headline = means.get("rougeL", next(iter(means.values())))
    return ScoreReport(
        metric_id="rouge",
        corpus_score=headline,
        per_sample=per_variant.get("rougeL"),
        subgroup_scores=means,
        config_echo=config,
    )
