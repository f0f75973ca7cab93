"""Deterministic in-process toy backend for tests and fixture runs.

Toy model semantics (also the contract the out-of-process reference server
implements, so golden outputs are identical between the two):

* tokenization is whitespace split;
* ``echo``: generate returns the prompt's final line (stop-truncated, then
  capped at max_new_tokens tokens); choice logits count case-folded
  occurrences of each choice in the prompt, with the full-sequence logprob
  sum penalized by 0.5 per choice token; token NLL is 1.0 per token;
* ``uniform:V``: every token logprob is -ln(V); choice logits are all 0;
* ``fixed:{...}``: choice logits come from the given table; generation and
  token NLL fall back to echo/uniform(2) behavior respectively.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from polyeval.errors import PolyevalError
from polyeval.inference.wire import validate_request


@dataclass(frozen=True)
class ToyModelSpec:
    mode: str  # "echo" | "uniform" | "fixed"
    vocab_size: int = 2
    fixed_logit_table: dict[str, float] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        if self.mode not in ("echo", "uniform", "fixed"):
            raise PolyevalError(f"unknown toy model mode: {self.mode!r}")
        if self.mode == "uniform" and self.vocab_size < 2:
            raise PolyevalError("uniform vocab size must be >= 2")

    @classmethod
    def parse(cls, text: str) -> "ToyModelSpec":
        """Parse ``echo``, ``uniform:V`` or ``fixed:<json table>``."""
        if text == "echo":
            return cls("echo")
        if text.startswith("uniform:"):
            return cls("uniform", vocab_size=int(text.split(":", 1)[1]))
        if text.startswith("fixed:"):
            return cls("fixed", fixed_logit_table=json.loads(text.split(":", 1)[1]))
        raise PolyevalError(f"unknown toy model spec: {text!r}")


def _truncate_at_stop(text: str, stop: list[str]) -> str:
    cut = len(text)
    for marker in stop:
        idx = text.find(marker)
        if idx != -1:
            cut = min(cut, idx)
    return text[:cut]


class ToyModel:
    """Pure functions over the wire payloads; safe for concurrent callers."""

    def __init__(self, spec: ToyModelSpec):
        self.spec = spec

    def handle(self, payload: dict) -> dict:
        validate_request(payload)
        kind = payload["kind"]
        if kind == "Generate":
            return self.generate(payload["prompt"], payload["max_new_tokens"], payload["stop"])
        if kind == "ScoreChoices":
            return self.score_choices(payload["prompt"], payload["choices"])
        return self.token_nll(payload["text"])

    def generate(self, prompt: str, max_new_tokens: int, stop: list[str]) -> dict:
        out = prompt.split("\n")[-1]
        out = _truncate_at_stop(out, stop)
        tokens = out.split()
        if len(tokens) > max_new_tokens:
            out = " ".join(tokens[:max_new_tokens])
        return {"output_text": out, "generated_token_count": len(out.split())}

    def score_choices(self, prompt: str, choices: list[str]) -> dict:
        if not choices:
            raise PolyevalError("choices must be non-empty")
        if self.spec.mode == "fixed":
            try:
                logits = [float(self.spec.fixed_logit_table[c]) for c in choices]
            except KeyError as exc:
                raise PolyevalError(f"fixed logit table does not cover choice {exc}") from None
            sums = list(logits)
        elif self.spec.mode == "uniform":
            logits = [0.0] * len(choices)
            sums = [-math.log(self.spec.vocab_size) * len(c.split()) for c in choices]
        else:
            folded = prompt.casefold()
            logits = [float(folded.count(c.casefold())) if c else 0.0 for c in choices]
            sums = [logit - 0.5 * len(c.split()) for logit, c in zip(logits, choices)]
        return {"choice_logits": logits, "choice_logprob_sums": sums}

    def token_nll(self, text: str) -> dict:
        n = len(text.split())
        logprob = -math.log(self.spec.vocab_size) if self.spec.mode == "uniform" else -1.0
        return {"token_logprobs": [logprob] * n, "token_count": n}
