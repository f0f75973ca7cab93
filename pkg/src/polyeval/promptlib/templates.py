"""Prompt template store, strategy-driven selection, and rendering."""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from polyeval.errors import PolyevalError
from polyeval.langid.tags import LanguageTag

ENGLISH = LanguageTag("eng", "Latn")

_PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


class MissingBinding(PolyevalError):
    pass


class UnknownPlaceholder(PolyevalError):
    pass


class NoEnglishBaseline(PolyevalError):
    pass


def parse_placeholders(text: str) -> Counter:
    """Multiset of ``{name}`` placeholder occurrences in a template body."""
    return Counter(_PLACEHOLDER.findall(text))


@dataclass
class PromptTemplate:
    """Instruction text (plus optional few-shot item template) for one (task, tag)."""

    task_kind: str
    tag: LanguageTag
    instruction: str
    fewshot_item: str | None = None
    provenance: str = "hand-written"

    @property
    def placeholders(self) -> set[str]:
        names = set(parse_placeholders(self.instruction))
        if self.fewshot_item:
            names |= set(parse_placeholders(self.fewshot_item))
        return names

    def placeholder_multiset(self) -> Counter:
        counts = parse_placeholders(self.instruction)
        if self.fewshot_item:
            counts += parse_placeholders(self.fewshot_item)
        return counts


@dataclass
class PromptStrategy:
    """``multi`` follows the test language; ``single`` pins one prompt language."""

    mode: str  # "single" | "multi"
    single_language: LanguageTag | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("single", "multi"):
            raise PolyevalError(f"prompt strategy mode must be single or multi, got {self.mode!r}")
        if self.mode == "single" and self.single_language is None:
            raise PolyevalError("single prompt strategy requires a language")


@dataclass
class PromptLibrary:
    """In-memory library: task kind -> canonical tag string -> template.

    On disk this is one JSON file per task kind under a library directory,
    ``prompts/<task_kind>.json``, keyed by canonical tag.
    """

    templates: dict[str, dict[str, PromptTemplate]] = field(default_factory=dict)

    def add(self, template: PromptTemplate) -> None:
        self.templates.setdefault(template.task_kind, {})[str(template.tag)] = template

    def get(self, task_kind: str, tag: LanguageTag) -> PromptTemplate | None:
        return self.templates.get(task_kind, {}).get(str(tag))

    def tags_for(self, task_kind: str) -> list[str]:
        return sorted(self.templates.get(task_kind, {}))

    @classmethod
    def load(cls, directory: str | Path) -> "PromptLibrary":
        lib = cls()
        for path in sorted(Path(directory).glob("*.json")):
            task_kind = path.stem
            data = json.loads(path.read_text(encoding="utf-8"))
            for tag_str, entry in data.items():
                lib.add(
                    PromptTemplate(
                        task_kind=task_kind,
                        tag=LanguageTag.parse(tag_str),
                        instruction=entry["instruction"],
                        fewshot_item=entry.get("fewshot_item"),
                        provenance=entry.get("provenance", "hand-written"),
                    )
                )
        return lib

    def save(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        for task_kind, by_tag in sorted(self.templates.items()):
            data = {}
            for tag_str in sorted(by_tag):
                t = by_tag[tag_str]
                entry: dict[str, str] = {"instruction": t.instruction}
                if t.fewshot_item is not None:
                    entry["fewshot_item"] = t.fewshot_item
                entry["provenance"] = t.provenance
                data[tag_str] = entry
            out = directory / f"{task_kind}.json"
            out.write_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def select_template(
    library: PromptLibrary,
    strategy: PromptStrategy,
    task_kind: str,
    test_tag: LanguageTag,
) -> tuple[PromptTemplate, bool]:
    """Pick the template for a subset; fall back to English when absent.

    ``single`` uses the strategy's pinned language for every subset;
    ``multi`` uses the test language (for translation, callers pass the
    direction's source tag). Returns (template, used_fallback).
    """
    wanted = strategy.single_language if strategy.mode == "single" else test_tag
    template = library.get(task_kind, wanted)
    if template is not None:
        return template, False
    fallback = library.get(task_kind, ENGLISH)
    if fallback is None:
        raise NoEnglishBaseline(f"no {ENGLISH} template for task {task_kind!r}")
    return fallback, True


def _substitute(text: str, bindings: dict[str, str], where: str) -> str:
    allowed = set(parse_placeholders(text))
    for name in bindings:
        if name not in allowed:
            raise UnknownPlaceholder(f"{where}: binding {name!r} has no placeholder")

    def repl(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise MissingBinding(f"{where}: no binding for placeholder {name!r}")
        return bindings[name]

    return _PLACEHOLDER.sub(repl, text)


def render_prompt(
    template: PromptTemplate,
    bindings: dict[str, str],
    fewshot: list[dict[str, str]] | None = None,
) -> str:
    """Render few-shot blocks (newline-joined) followed by the instruction.

    Every placeholder must be bound and every binding must name a
    placeholder; no ``{name}`` token survives in the output.
    """
    blocks: list[str] = []
    if fewshot:
        if not template.fewshot_item:
            raise UnknownPlaceholder("template has no fewshot_item but few-shot bindings were given")
        for i, item in enumerate(fewshot):
            blocks.append(_substitute(template.fewshot_item, item, f"fewshot[{i}]"))
    blocks.append(_substitute(template.instruction, bindings, "instruction"))
    return "\n".join(blocks)
