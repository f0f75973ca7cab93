"""Pluggable tokenizers for word-level metrics.

``test-ws`` is the deterministic whitespace+punctuation splitter used by
fixtures and tests. Subword tokenizers (e.g. the flores200-style model
referenced in report signatures) are loaded from a serialized vocabulary
via ``load_subword_tokenizer`` and registered under an id of the caller's
choice; score reports always echo the id actually used.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Callable

from polyeval.errors import PolyevalError

Tokenizer = Callable[[str], list[str]]


class UnknownTokenizer(PolyevalError):
    pass


_WORD_OR_PUNCT = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def whitespace_tokenize(text: str) -> list[str]:
    return text.split()


def word_punct_tokenize(text: str) -> list[str]:
    return _WORD_OR_PUNCT.findall(text)


_REGISTRY: dict[str, Tokenizer] = {
    "ws": whitespace_tokenize,
    "test-ws": word_punct_tokenize,
}


def register_tokenizer(tokenizer_id: str, fn: Tokenizer) -> None:
    _REGISTRY[tokenizer_id] = fn


def get_tokenizer(tokenizer_id: str) -> Tokenizer:
    try:
        return _REGISTRY[tokenizer_id]
    except KeyError:
        raise UnknownTokenizer(
            f"tokenizer {tokenizer_id!r} is not registered; known: {sorted(_REGISTRY)}"
        ) from None


class SubwordTokenizer:
    """Greedy longest-match subword segmentation over a fixed vocabulary.

    The model file is JSON: ``{"vocab": ["pieces", ...]}``. Unknown spans
    fall back to single characters, so tokenization is total.
    """

    def __init__(self, vocab: list[str]):
        self.vocab = set(vocab)
        self.max_piece = max((len(v) for v in vocab), default=1)

    @classmethod
    def load(cls, path: str | Path) -> "SubwordTokenizer":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(data["vocab"])

    def __call__(self, text: str) -> list[str]:
        pieces: list[str] = []
        for word in text.split():
            i = 0
            while i < len(word):
                for j in range(min(len(word), i + self.max_piece), i, -1):
                    if word[i:j] in self.vocab or j == i + 1:
                        pieces.append(word[i:j])
                        i = j
                        break
        return pieces


def load_subword_tokenizer(tokenizer_id: str, model_path: str | Path) -> SubwordTokenizer:
    tok = SubwordTokenizer.load(model_path)
    register_tokenizer(tokenizer_id, tok)
    return tok
