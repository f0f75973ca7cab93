"""Machine propagation of templates with placeholder integrity.

Placeholders are swapped for opaque ``⟦Pk⟧`` sentinels before the text is
sent to a translation service (bracketed tokens pass through translation
engines untouched), then restored positionally by ordinal, so a translator
may reorder them. A propagated template is accepted only if its
placeholder multiset equals the source's.
"""

from __future__ import annotations

import re
from typing import Iterable, Protocol, Sequence

import requests

from polyeval.errors import PolyevalError
from polyeval.langid.tags import LanguageTag
from polyeval.promptlib.templates import PromptTemplate, _PLACEHOLDER

_SENTINEL = re.compile(r"⟦P(\d+)⟧")


class TranslatorUnavailable(PolyevalError):
    pass


class PlaceholderLost(PolyevalError):
    pass


class TargetUnsupported(PolyevalError):
    pass


class TranslationClient(Protocol):
    def translate(self, texts: Sequence[str], to: Sequence[str], source: str) -> dict[str, list[str]]:
        """Map each target tag to the translated texts, in input order."""
        ...


class HttpTranslationClient:
    """Generic driver for the POST /translate wire contract."""

    def __init__(self, base_url: str, timeout: float = 60.0, session: requests.Session | None = None):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.session = session or requests.Session()

    def translate(self, texts: Sequence[str], to: Sequence[str], source: str) -> dict[str, list[str]]:
        try:
            resp = self.session.post(
                f"{self.base_url}/translate",
                json={"texts": list(texts), "to": list(to), "from": source},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise TranslatorUnavailable(f"translator unreachable: {exc}") from exc
        if resp.status_code != 200:
            raise TranslatorUnavailable(f"translator returned HTTP {resp.status_code}")
        body = resp.json()
        return {entry["to"]: list(entry["texts"]) for entry in body.get("translations", [])}


class IdentityTranslator:
    """Test double: every target receives the source texts unchanged."""

    def translate(self, texts: Sequence[str], to: Sequence[str], source: str) -> dict[str, list[str]]:
        return {target: list(texts) for target in to}


class SentinelDroppingTranslator:
    """Test double that deletes the first sentinel for chosen targets."""

    def __init__(self, corrupt_targets: Iterable[str]):
        self.corrupt = set(corrupt_targets)

    def translate(self, texts: Sequence[str], to: Sequence[str], source: str) -> dict[str, list[str]]:
        out = {}
        for target in to:
            if target in self.corrupt:
                out[target] = [_SENTINEL.sub("", t, count=1) for t in texts]
            else:
                out[target] = list(texts)
        return out


def encode_sentinels(text: str) -> tuple[str, list[str]]:
    """Replace each placeholder occurrence with ``⟦Pk⟧``; k is the ordinal."""
    names: list[str] = []

    def repl(match: re.Match) -> str:
        names.append(match.group(1))
        return f"⟦P{len(names) - 1}⟧"

    return _PLACEHOLDER.sub(repl, text), names


def decode_sentinels(text: str, names: list[str]) -> str:
    """Restore ``{name}`` tokens; every ordinal must appear exactly once."""
    found = [int(m.group(1)) for m in _SENTINEL.finditer(text)]
    if sorted(found) != list(range(len(names))):
        raise PlaceholderLost(
            f"expected sentinels 0..{len(names) - 1} exactly once, found {sorted(found)}"
        )
    return _SENTINEL.sub(lambda m: "{" + names[int(m.group(1))] + "}", text)


def propagate_template(
    template: PromptTemplate,
    targets: Sequence[LanguageTag],
    translator: TranslationClient,
) -> tuple[dict[LanguageTag, PromptTemplate], dict[LanguageTag, str]]:
    """Translate a template into each target language.

    Returns (accepted templates keyed by target, failure messages keyed by
    target). Per-target integrity failures never abort the batch; a dead
    translator does (TranslatorUnavailable).
    """
    if not targets:
        raise PolyevalError("propagation needs at least one target")
    enc_instruction, instruction_names = encode_sentinels(template.instruction)
    texts = [enc_instruction]
    fewshot_names: list[str] = []
    if template.fewshot_item is not None:
        enc_fewshot, fewshot_names = encode_sentinels(template.fewshot_item)
        texts.append(enc_fewshot)

    translated = translator.translate(texts, [str(t) for t in targets], str(template.tag))

    source_multiset = template.placeholder_multiset()
    accepted: dict[LanguageTag, PromptTemplate] = {}
    failures: dict[LanguageTag, str] = {}
    for target in targets:
        key = str(target)
        if key not in translated:
            failures[target] = f"TargetUnsupported: translator returned nothing for {key}"
            continue
        out_texts = translated[key]
        if len(out_texts) != len(texts):
            failures[target] = f"TargetUnsupported: expected {len(texts)} texts, got {len(out_texts)}"
            continue
        try:
            instruction = decode_sentinels(out_texts[0], instruction_names)
            fewshot = (
                decode_sentinels(out_texts[1], fewshot_names)
                if template.fewshot_item is not None
                else None
            )
        except PlaceholderLost as exc:
            failures[target] = f"PlaceholderLost: {exc}"
            continue
        candidate = PromptTemplate(
            task_kind=template.task_kind,
            tag=target,
            instruction=instruction,
            fewshot_item=fewshot,
            provenance="machine-translated",
        )
        if candidate.placeholder_multiset() != source_multiset:
            failures[target] = "PlaceholderLost: placeholder multiset changed during translation"
            continue
        accepted[target] = candidate
    return accepted, failures
