"""Task-specific cleanup of raw model output before scoring."""

from __future__ import annotations

import re

_BLANK_LINE = re.compile(r"\n[ \t]*\n")
# a standalone option letter, tolerating (A), [A], A., A)
_OPTION = re.compile(r"(?<![A-Za-z0-9])[\(\[]?([A-Da-d])[\)\]\.:]?(?![A-Za-z0-9])")

_FREE_TEXT_TASKS = ("Translation", "Summarization", "OpenGeneration")


def _trim(raw: str, stop: list[str] | None) -> str:
    text = raw
    for marker in stop or ():
        idx = text.find(marker)
        if idx != -1:
            text = text[:idx]
    text = text.strip()
    return _BLANK_LINE.split(text, maxsplit=1)[0].strip()


def postprocess(raw_output: str, task_kind: str, stop: list[str] | None = None) -> str | None:
    """Free-text tasks: stop-trim, strip, keep content before the first blank line.

    Comprehension: extract the first standalone option letter A-D
    (case-insensitive); None means Unparsed, which scores as wrong.
    """
    if task_kind == "Comprehension":
        text = _trim(raw_output, stop)
        match = _OPTION.search(text)
        return match.group(1).upper() if match else None
    if task_kind in _FREE_TEXT_TASKS:
        return _trim(raw_output, stop)
    return raw_output.strip()


def postprocess_tags(raw_output: str, n_tokens: int) -> list[str]:
    """Whitespace-split a generated tag sequence, padded/cut to the token count."""
    tags = _trim(raw_output, None).split()
    if len(tags) < n_tokens:
        tags = tags + ["O"] * (n_tokens - len(tags))
    return tags[:n_tokens]
