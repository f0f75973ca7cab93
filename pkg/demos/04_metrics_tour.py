"""A tour of the scoring kernels on tiny worked examples."""

import math

from polyeval.metrics import (
    MetricConfig,
    aggregate_nll,
    bleu,
    chrf,
    chrf_by_gender,
    classification_scores,
    rouge,
    self_bleu,
    span_f1,
)

# ---- BLEU: n-gram precision with exponential smoothing ---------------------
hyps = ["the cat sat on the mat", "a dog ran across the yard"]
refs = ["the cat sat on a mat", "the dog ran across the yard"]
report = bleu(hyps, refs)
print(f"BLEU   = {report.corpus_score:6.2f}   signature: {report.signature}")

# ---- chrF and chrF++ --------------------------------------------------------
print(f"chrF   = {chrf(hyps, refs).corpus_score:6.2f}")
cfg = MetricConfig(metric_id="chrf++")
cfg.chrf.word_order = 2
print(f"chrF++ = {chrf(hyps, refs, cfg).corpus_score:6.2f}")

# ---- chrF split by grammatical gender: a bias probe -------------------------
records = [
    ("the doctor treated the patient", "the doctor treated the patient", "Masculine"),
    ("the doctor treated a patient", "the doctor treated the patient", "Feminine"),
]
gender = chrf_by_gender(records)
sub = gender.subgroup_scores
print(
    f"chrF by gender: masculine={sub['Masculine']:.2f} feminine={sub['Feminine']:.2f} "
    f"delta={sub['delta']:+.2f}  (positive delta favors masculine forms)"
)

# ---- ROUGE for summaries -----------------------------------------------------
rep = rouge(["council approves four new tram lines"], ["the council approved four tram lines"])
print("ROUGE  =", {k: round(v, 3) for k, v in rep.subgroup_scores.items()})

# ---- classification and span tagging ----------------------------------------
clf = classification_scores(["sports", "science", "sports"], ["sports", "science", "politics"])
print(f"classification: accuracy={clf.subgroup_scores['accuracy']:.3f} "
      f"macro_f1={clf.subgroup_scores['macro_f1']:.3f}")

spans = span_f1(
    [["B-PER", "O", "O", "B-LOC"]],
    [["B-PER", "I-PER", "O", "B-LOC"]],
)
print(f"span F1 = {spans.corpus_score:.3f} (one boundary error) notes={spans.notes}")

# ---- self-BLEU: high = repetitive generation ---------------------------------
diverse = ["a quiet morning by the lake", "robots enjoy electric dreams", "fresh bread smells wonderful"]
repetitive = ["the same old sentence again"] * 3
print(f"self-BLEU diverse    = {self_bleu(diverse).corpus_score:6.2f}")
print(f"self-BLEU repetitive = {self_bleu(repetitive).corpus_score:6.2f}")

# ---- corpus NLL and derived PPL ----------------------------------------------
report = aggregate_nll([10.0, 4.0], [5, 2])
print(f"NLL = {report.corpus_score:.1f} over 7 tokens -> PPL = {report.subgroup_scores['ppl']:.3f} "
      f"(= exp({report.corpus_score:.1f}/7) = {math.exp(report.corpus_score / 7):.3f})")
print()
print("NLL is the comparison metric across models: unlike PPL it carries no")
print("per-token normalization, so different tokenizers cannot distort it.")
