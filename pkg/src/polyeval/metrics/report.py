"""Score report and metric configuration types."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from polyeval import __version__
from polyeval.errors import PolyevalError


class LengthMismatch(PolyevalError):
    pass


class EmptyCorpus(PolyevalError):
    pass


@dataclass
class BleuConfig:
    max_ngram: int = 4
    smoothing: str = "exp"
    case_sensitive: bool = True
    effective_order: bool = False
    tokenizer_id: str = "test-ws"


@dataclass
class ChrfConfig:
    char_order: int = 6
    word_order: int = 0  # 0 = chrF, 2 = chrF++
    beta: float = 2.0
    whitespace_ignored_in_char_ngrams: bool = True


@dataclass
class RougeConfig:
    variants: tuple[str, ...] = ("rouge1", "rouge2", "rougeL")
    use_stemmer: bool = False


@dataclass
class MetricConfig:
    metric_id: str = ""
    bleu: BleuConfig = field(default_factory=BleuConfig)
    chrf: ChrfConfig = field(default_factory=ChrfConfig)
    rouge: RougeConfig = field(default_factory=RougeConfig)

    def __post_init__(self) -> None:
        if self.bleu.max_ngram < 1 or self.chrf.char_order < 1:
            raise PolyevalError("n-gram orders must be >= 1")
        if self.chrf.beta <= 0:
            raise PolyevalError("chrF beta must be > 0")


def signature(metric_id: str, config: MetricConfig) -> str:
    """Render the report signature, e.g. ``nrefs:1|case:mixed|eff:no|tok:test-ws|smooth:exp|version:0.1.0``."""
    if metric_id in ("bleu", "self_bleu"):
        b = config.bleu
        case = "mixed" if b.case_sensitive else "lc"
        eff = "yes" if b.effective_order else "no"
        return f"nrefs:1|case:{case}|eff:{eff}|tok:{b.tokenizer_id}|smooth:{b.smoothing}|version:{__version__}"
    if metric_id.startswith("chrf"):
        c = config.chrf
        space = "no" if c.whitespace_ignored_in_char_ngrams else "yes"
        return f"nrefs:1|case:mixed|nc:{c.char_order}|nw:{c.word_order}|beta:{c.beta:g}|space:{space}|version:{__version__}"
    if metric_id == "rouge":
        r = config.rouge
        return f"nrefs:1|case:lc|variants:{','.join(v.lower() for v in r.variants)}|stemmer:{'yes' if r.use_stemmer else 'no'}|version:{__version__}"
    return f"metric:{metric_id}|version:{__version__}"


@dataclass
class ScoreReport:
    """One metric's outcome over a corpus (or subset)."""

    metric_id: str
    corpus_score: float
    per_sample: list[float] | None = None
    subgroup_scores: dict[str, float] | None = None
    config_echo: MetricConfig = field(default_factory=MetricConfig)
    notes: dict[str, object] = field(default_factory=dict)

    @property
    def signature(self) -> str:
        return signature(self.metric_id, self.config_echo)

    def to_json_dict(self, include_per_sample: bool = False) -> dict:
        out: dict[str, object] = {
            "metric_id": self.metric_id,
            "corpus_score": round(self.corpus_score, 6),
            "signature": self.signature,
        }
        if self.subgroup_scores is not None:
            out["subgroup_scores"] = {k: round(v, 6) for k, v in self.subgroup_scores.items()}
        if include_per_sample and self.per_sample is not None:
            out["per_sample"] = [round(v, 6) for v in self.per_sample]
        if self.notes:
            out["notes"] = self.notes
        config = asdict(self.config_echo)
        if self.metric_id in ("bleu", "self_bleu"):
            out["config"] = {"bleu": config["bleu"]}
        elif self.metric_id.startswith("chrf"):
            out["config"] = {"chrf": config["chrf"]}
        elif self.metric_id == "rouge":
            out["config"] = {"rouge": config["rouge"]}
        else:
            out["config"] = {}
        return out
