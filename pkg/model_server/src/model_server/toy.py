"""Deterministic toy backends.

These mirror, bit for bit, the toy semantics of the orchestrator's
in-process stub, so an end-to-end fixture run produces identical reports
whichever side serves it:

* tokenization is whitespace split;
* ``echo``: generation returns the prompt's final line, truncated at the
  first stop marker and then to ``max_new_tokens`` tokens; choice logits
  count case-folded occurrences of each choice in the prompt, and the
  full-sequence logprob sum is the logit minus 0.5 per choice token;
  token NLL is 1.0 per token;
* ``uniform:V``: every token logprob is -ln(V); choice logits are all
  zero with logprob sums -ln(V) per choice token;
* ``fixed:{...}``: choice logits come from the table verbatim (and double
  as the logprob sums); generation and token NLL behave like ``echo``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


class BadRequest(ValueError):
    """Client-side mistake; the server answers 400."""


@dataclass(frozen=True)
class ToySpec:
    mode: str  # "echo" | "uniform" | "fixed"
    vocab_size: int = 2
    fixed_logit_table: dict[str, float] = field(default_factory=dict, hash=False)

    def __post_init__(self) -> None:
        if self.mode not in ("echo", "uniform", "fixed"):
            raise ValueError(f"unknown toy mode: {self.mode!r}")
        if self.mode == "uniform" and self.vocab_size < 2:
            raise ValueError("uniform vocab size must be >= 2")

    @classmethod
    def parse(cls, text: str) -> "ToySpec":
        """Parse ``echo``, ``uniform:V`` or ``fixed:<json table>``."""
        if text == "echo":
            return cls("echo")
        if text.startswith("uniform:"):
            return cls("uniform", vocab_size=int(text.split(":", 1)[1]))
        if text.startswith("fixed:"):
            return cls("fixed", fixed_logit_table=json.loads(text.split(":", 1)[1]))
        raise ValueError(f"unknown toy spec: {text!r}")


class ToyBackend:
    def __init__(self, spec: ToySpec):
        self.spec = spec

    def generate(self, prompt: str, max_new_tokens: int, stop: list[str]) -> dict:
        if not isinstance(max_new_tokens, int) or max_new_tokens < 0:
            raise BadRequest("max_new_tokens must be a non-negative integer")
        out = prompt.split("\n")[-1]
        cut = len(out)
        for marker in stop:
            idx = out.find(marker)
            if idx != -1:
                cut = min(cut, idx)
        out = out[:cut]
        tokens = out.split()
        if len(tokens) > max_new_tokens:
            out = " ".join(tokens[:max_new_tokens])
        return {"output_text": out, "generated_token_count": len(out.split())}

    def score_choices(self, prompt: str, choices: list[str]) -> dict:
        if not choices:
            raise BadRequest("choices must be non-empty")
        if self.spec.mode == "fixed":
            missing = [c for c in choices if c not in self.spec.fixed_logit_table]
            if missing:
                raise BadRequest(f"fixed logit table does not cover choices: {missing}")
            logits = [float(self.spec.fixed_logit_table[c]) for c in choices]
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
