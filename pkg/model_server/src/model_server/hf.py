"""Local transformer backend: greedy decoding, choice logits, token NLL.

Optional; importing this module requires torch (install the ``hf`` extra
for hub models). The backend accepts any causal LM exposing
``model(input_ids).logits`` plus a tokenizer with ``encode``/``decode``
and optional ``bos_token_id``/``eos_token_id``, so tests can drive it with
a tiny randomly initialized model and no downloads.
"""

from __future__ import annotations

import torch

DEFAULT_WINDOW = 1024
DEFAULT_STRIDE = 512


def window_segments(n: int, window: int, stride: int) -> list[tuple[int, int, int]]:
    """(start, end, scored_from) segments whose scored ranges tile [0, n)."""
    segments = []
    i = 0
    while True:
        start = i * stride
        end = min(start + window, n)
        scored_from = start if i == 0 else min(start + (window - stride), end)
        segments.append((start, end, scored_from))
        if end >= n:
            return segments
        i += 1


class HfBackend:
    """Deterministic (sampling-free) driver for a local causal LM."""

    def __init__(self, model, tokenizer, window: int = DEFAULT_WINDOW, stride: int = DEFAULT_STRIDE):
        self.model = model
        self.tokenizer = tokenizer
        self.window = window
        self.stride = stride
        self.model.eval()

    @classmethod
    def from_pretrained(cls, model_id: str, **kwargs) -> "HfBackend":
        from transformers import AutoModelForCausalLM, AutoTokenizer

        model = AutoModelForCausalLM.from_pretrained(model_id)
        tokenizer = AutoTokenizer.from_pretrained(model_id)
        return cls(model, tokenizer, **kwargs)

    def _ids(self, text: str) -> list[int]:
        return list(self.tokenizer.encode(text))

    @torch.no_grad()
    def _next_logits(self, ids: list[int]) -> torch.Tensor:
        context = ids[-self.window :]
        out = self.model(torch.tensor([context]))
        return out.logits[0, -1]

    @torch.no_grad()
    def generate(self, prompt: str, max_new_tokens: int, stop: list[str]) -> dict:
        ids = self._ids(prompt)
        eos = getattr(self.tokenizer, "eos_token_id", None)
        new_ids: list[int] = []
        text = ""
        for _ in range(max_new_tokens):
            next_id = int(torch.argmax(self._next_logits(ids + new_ids)))
            if eos is not None and next_id == eos:
                break
            new_ids.append(next_id)
            text = self.tokenizer.decode(new_ids)
            if any(marker in text for marker in stop):
                break
        for marker in stop:
            idx = text.find(marker)
            if idx != -1:
                text = text[:idx]
        return {"output_text": text, "generated_token_count": len(new_ids)}

    @torch.no_grad()
    def score_choices(self, prompt: str, choices: list[str]) -> dict:
        prompt_ids = self._ids(prompt)
        next_logits = self._next_logits(prompt_ids)
        logprobs = torch.log_softmax(next_logits, dim=-1)
        logits = []
        sums = []
        for choice in choices:
            choice_ids = self._ids(choice)
            if not choice_ids:
                logits.append(0.0)
                sums.append(0.0)
                continue
            logits.append(float(next_logits[choice_ids[0]]))
            # teacher-forced full-sequence logprob of the choice continuation
            total = float(logprobs[choice_ids[0]])
            ids = prompt_ids + [choice_ids[0]]
            for token_id in choice_ids[1:]:
                step = torch.log_softmax(self._next_logits(ids), dim=-1)
                total += float(step[token_id])
                ids.append(token_id)
            sums.append(total)
        return {"choice_logits": logits, "choice_logprob_sums": sums}

    @torch.no_grad()
    def token_nll(self, text: str) -> dict:
        """Teacher-forced per-token logprobs under the strided window plan.

        A BOS token, when the tokenizer has one, conditions the first text
        token; otherwise the first token scores 0.0 (no context exists).
        """
        ids = self._ids(text)
        bos = getattr(self.tokenizer, "bos_token_id", None)
        if not ids:
            return {"token_logprobs": [], "token_count": 0}
        logprobs = [0.0] * len(ids)
        for start, end, scored_from in window_segments(len(ids), self.window, self.stride):
            context = ids[start:end]
            if bos is not None:
                context = [bos] + context
            out = self.model(torch.tensor([context]))
            step_logprobs = torch.log_softmax(out.logits[0], dim=-1)
            offset = 1 if bos is not None else 0
            for pos in range(scored_from, end):
                local = pos - start + offset  # predicted by position local-1
                if local == 0:
                    continue  # first token of the stream without BOS: unscored
                logprobs[pos] = float(step_logprobs[local - 1, ids[pos]])
        return {"token_logprobs": logprobs, "token_count": len(ids)}
