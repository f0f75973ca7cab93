"""Corpus BLEU with exponential smoothing, and each-vs-rest self-BLEU."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from polyeval.errors import PolyevalError
from polyeval.metrics.report import EmptyCorpus, LengthMismatch, MetricConfig, ScoreReport
from polyeval.metrics.tokenizers import get_tokenizer


class TooFewOutputs(PolyevalError):
    pass


def _ngram_counts(tokens: list[str], max_order: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


def _ref_stats(hyp_len: int, ref_token_lists: list[list[str]], max_order: int) -> tuple[Counter, int]:
    """Clipped reference counts (max per n-gram across refs) and closest ref length."""
    merged: Counter = Counter()
    closest_len = None
    closest_diff = None
    for ref_tokens in ref_token_lists:
        diff = abs(hyp_len - len(ref_tokens))
        if closest_diff is None or diff < closest_diff or (diff == closest_diff and len(ref_tokens) < closest_len):
            closest_diff = diff
            closest_len = len(ref_tokens)
        for gram, cnt in _ngram_counts(ref_tokens, max_order).items():
            merged[gram] = max(merged[gram], cnt)
    return merged, closest_len


def _bleu_from_stats(
    correct: list[int], total: list[int], sys_len: int, ref_len: int, max_order: int
) -> float:
    """BLEU from sufficient statistics; zero-count orders get exp smoothing."""
    if sys_len == 0:
        return 0.0
    log_sum = 0.0
    smooth = 1.0
    for n in range(1, max_order + 1):
        if total[n - 1] == 0:
            return 0.0
        if correct[n - 1] == 0:
            smooth *= 2.0
            precision = 1.0 / (smooth * total[n - 1])
        else:
            precision = correct[n - 1] / total[n - 1]
        log_sum += math.log(precision)
    bp = 1.0 if sys_len >= ref_len else math.exp(1.0 - ref_len / sys_len)
    return 100.0 * bp * math.exp(log_sum / max_order)


def _corpus_stats(
    hypotheses: Sequence[str],
    reference_lists: Sequence[Sequence[str]],
    config: MetricConfig,
) -> tuple[list[int], list[int], int, int]:
    order = config.bleu.max_ngram
    tokenize = get_tokenizer(config.bleu.tokenizer_id)
    correct = [0] * order
    total = [0] * order
    sys_len = 0
    ref_len = 0
    for hyp, refs in zip(hypotheses, reference_lists):
        if not config.bleu.case_sensitive:
            hyp = hyp.lower()
            refs = [r.lower() for r in refs]
        hyp_tokens = tokenize(hyp)
        ref_tokens = [tokenize(r) for r in refs]
        ref_ngrams, closest = _ref_stats(len(hyp_tokens), ref_tokens, order)
        sys_len += len(hyp_tokens)
        ref_len += closest
        for gram, cnt in _ngram_counts(hyp_tokens, order).items():
            n = len(gram)
            correct[n - 1] += min(cnt, ref_ngrams.get(gram, 0))
            total[n - 1] += cnt
    return correct, total, sys_len, ref_len


def bleu(
    hypotheses: Sequence[str],
    references: Sequence[str],
    config: MetricConfig | None = None,
) -> ScoreReport:
    """Corpus BLEU over single-reference pairs, on the 0-100 scale.

    Geometric mean of modified n-gram precisions (orders 1..max_ngram)
    with exponential smoothing for zero counts, times the brevity penalty
    min(1, e^(1 - r/c)). Tokenization follows ``config.bleu.tokenizer_id``.
    """
    config = config or MetricConfig(metric_id="bleu")
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise EmptyCorpus("no hypothesis/reference pairs")
    correct, total, sys_len, ref_len = _corpus_stats(hypotheses, [[r] for r in references], config)
    score = _bleu_from_stats(correct, total, sys_len, ref_len, config.bleu.max_ngram)
    return ScoreReport(metric_id="bleu", corpus_score=score, config_echo=config)


def self_bleu(outputs: Sequence[str], config: MetricConfig | None = None) -> ScoreReport:
    """Mean BLEU of each output against the remaining outputs (multi-reference).

    High values flag repetitive or degenerate generation across a subset.
    """
    config = config or MetricConfig(metric_id="self_bleu")
    if len(outputs) < 2:
        raise TooFewOutputs("self-BLEU needs at least two outputs")
    per_sample = []
    for i, hyp in enumerate(outputs):
        rest = [o for j, o in enumerate(outputs) if j != i]
        correct, total, sys_len, ref_len = _corpus_stats([hyp], [rest], config)
        per_sample.append(_bleu_from_stats(correct, total, sys_len, ref_len, config.bleu.max_ngram))
    return ScoreReport(
        metric_id="self_bleu",
        corpus_score=sum(per_sample) / len(per_sample),
        per_sample=per_sample,
        config_echo=config,
    )
