"""chrF / chrF++ and the gender-split chrF bias probe."""

from __future__ import annotations

import re
from collections import Counter
from typing import Sequence

from polyeval.metrics.report import EmptyCorpus, LengthMismatch, MetricConfig, ScoreReport

_WS = re.compile(r"\s+")


def _char_ngrams(text: str, n: int) -> Counter:
    return Counter(text[i : i + n] for i in range(len(text) - n + 1))


def _word_ngrams(words: list[str], n: int) -> Counter:
    return Counter(tuple(words[i : i + n]) for i in range(len(words) - n + 1))


def _pair_stats(hyp: str, ref: str, config: MetricConfig) -> list[tuple[int, int, int]]:
    """Per order: (hypothesis n-grams, reference n-grams, overlap)."""
    c = config.chrf
    if c.whitespace_ignored_in_char_ngrams:
        hyp_chars = _WS.sub("", hyp)
        ref_chars = _WS.sub("", ref)
    else:
        hyp_chars, ref_chars = hyp, ref
    stats = []
    for n in range(1, c.char_order + 1):
        h = _char_ngrams(hyp_chars, n)
        r = _char_ngrams(ref_chars, n)
        stats.append((sum(h.values()), sum(r.values()), sum((h & r).values())))
    hyp_words = hyp.split()
    ref_words = ref.split()
    for n in range(1, c.word_order + 1):
        h = _word_ngrams(hyp_words, n)
        r = _word_ngrams(ref_words, n)
        stats.append((sum(h.values()), sum(r.values()), sum((h & r).values())))
    return stats


def _f_beta(stats: list[tuple[int, int, int]], beta: float) -> float:
    """Average precision/recall over orders with any mass, combined as F_beta, scaled to 0-100."""
    precision = 0.0
    recall = 0.0
    effective = 0
    for hyp_total, ref_total, overlap in stats:
        if hyp_total > 0 and ref_total > 0:
            precision += overlap / hyp_total
            recall += overlap / ref_total
            effective += 1
    if effective == 0:
        return 0.0
    precision /= effective
    recall /= effective
    if precision + recall == 0.0:
        return 0.0
    b2 = beta * beta
    return 100.0 * (1 + b2) * precision * recall / (b2 * precision + recall)


def _corpus_chrf(hypotheses: Sequence[str], references: Sequence[str], config: MetricConfig) -> float:
    orders = config.chrf.char_order + config.chrf.word_order
    totals = [(0, 0, 0)] * orders
    for hyp, ref in zip(hypotheses, references):
        totals = [
            (a + x, b + y, c + z)
            for (a, b, c), (x, y, z) in zip(totals, _pair_stats(hyp, ref, config))
        ]
    return _f_beta(totals, config.chrf.beta)


def chrf(
    hypotheses: Sequence[str],
    references: Sequence[str],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """Corpus chrF (word_order 0) or chrF++ (word_order 2), on the 0-100 scale.

    Character n-gram statistics ignore whitespace; precision and recall are
    averaged over all n-gram orders and combined as F_beta with beta = 2.
    """
    config = config or MetricConfig(metric_id="chrf")
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise EmptyCorpus("no hypothesis/reference pairs")
    metric_id = "chrf++" if config.chrf.word_order else "chrf"
    return ScoreReport(
        metric_id=metric_id,
        corpus_score=_corpus_chrf(hypotheses, references, config),
        config_echo=config,
    )


def chrf_by_gender(
    records: Sequence[tuple[str, str, str]],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """chrF computed separately per grammatical-gender subset.

    ``records`` are (hypothesis, reference, gender) with gender Masculine
    or Feminine. The masculine-minus-feminine delta is the bias signal; a
    gender with no records is reported absent, not zero.
    """
    config = config or MetricConfig(metric_id="chrf_gender")
    if not records:
        raise EmptyCorpus("no gender-marked records")
    groups: dict[str, tuple[list[str], list[str]]] = {}
    for hyp, ref, gender in records:
        if gender not in ("Masculine", "Feminine"):
            raise LengthMismatch(f"gender must be Masculine or Feminine, got {gender!r}")
        groups.setdefault(gender, ([], []))
        groups[gender][0].append(hyp)
        groups[gender][1].append(ref)
    subgroup = {
        gender: _corpus_chrf(hyps, refs, config) for gender, (hyps, refs) in sorted(groups.items())
    }
    if "Masculine" in subgroup and "Feminine" in subgroup:
        subgroup["delta"] = subgroup["Masculine"] - subgroup["Feminine"]
    overall = _corpus_chrf([h for h, _, _ in records], [r for _, r, _ in records], config)
    return ScoreReport(
        metric_id="chrf_gender",
        corpus_score=overall,
        subgroup_scores=subgroup,
        config_echo=config,
    )
