"""Dominant-script detection over sampled corpus lines."""

from __future__ import annotations

import random
from collections import Counter
from functools import lru_cache

import fontTools.unicodedata as _ucd

from polyeval.errors import PolyevalError

DEFAULT_SAMPLE_SIZE = 100
DEFAULT_SEED = 42

# Unicode script values that carry no evidence about the writing system.
_NEUTRAL = {"Zyyy", "Zinh", "Zzzz"}


class NoScriptEvidence(PolyevalError):
    pass


@lru_cache(maxsize=None)
def _char_script(ch: str) -> str:
    return _ucd.script(ch)


def detect_script(
    lines,
    sample_size: int = DEFAULT_SAMPLE_SIZE,
    seed: int = DEFAULT_SEED,
) -> tuple[str, float]:
    """Return (ISO 15924 script, confidence) for a text sample.

    Samples up to ``sample_size`` lines with a seeded PRNG, counts the
    Unicode script property per character (skipping Common/Inherited/
    Unknown), and returns the majority script with its character share.
    Han text reports ``Hani``; distinguishing Hans/Hant needs a descriptor
    override.
    """
    lines = list(lines)
    k = min(sample_size, len(lines))
    sampled = random.Random(seed).sample(lines, k) if k else []

    counts: Counter[str] = Counter()
    for line in sampled:
        for ch in line:
            script = _char_script(ch)
            if script not in _NEUTRAL:
                counts[script] += 1

    total = sum(counts.values())
    if total == 0:
        raise NoScriptEvidence("sampled text contains no script-bearing characters")
    # deterministic tie-break: count, then lexicographic script code
    script, n = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return script, n / total
