"""Benchmark-level alignment and cross-benchmark language queries."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Callable, Iterable, Sequence

from polyeval.errors import PolyevalError
from polyeval.langid.iso_table import IsoTable, load_default_table
from polyeval.langid.resolve import AlignmentRecord, MatchKind, resolve_language
from polyeval.langid.script import DEFAULT_SEED, NoScriptEvidence, detect_script
from polyeval.langid.tags import InvalidTag, LanguageTag


class UnknownQueryCode(PolyevalError):
    pass


def align_benchmark(
    descriptor,
    corpus_sampler: Callable[[str], Sequence[str]],
    table: IsoTable | None = None,
    seed: int = DEFAULT_SEED,
) -> tuple[dict[str, LanguageTag], list[AlignmentRecord]]:
    """Resolve every original label of a benchmark to a canonical tag.

    ``descriptor`` needs ``labels`` and ``script_overrides`` attributes;
    ``corpus_sampler`` maps an original label to text lines for script
    detection. Script priority: descriptor override, then a script suffix
    on the label itself, then corpus detection. Per-label failures become
    report entries, never exceptions; unmatched labels are kept in the
    report but left out of the returned dictionary.
    """
    table = table or load_default_table()
    overrides: dict[str, str] = getattr(descriptor, "script_overrides", {}) or {}
    aligned: dict[str, LanguageTag] = {}
    report: list[AlignmentRecord] = []

    for label in descriptor.labels:
        record = resolve_language(label, table)
        if record.language is not None:
            try:
                detected, _conf = detect_script(corpus_sampler(label), seed=seed)
            except (NoScriptEvidence, PolyevalError, OSError):
                detected = None
            record.detected_script = detected
            override = overrides.get(label)
            script = override or record.script or detected
            record.script = script
            if script and detected and script != detected:
                record.note = f"declared script {script} differs from detected {detected}"
            if record.resolved is not None:
                aligned[label] = record.resolved
            else:
                record.note = "no script evidence; excluded from aligned dictionary"
        report.append(record)

    return aligned, report


def _match_one(tag: LanguageTag, item: str | LanguageTag, table: IsoTable) -> bool:
    if isinstance(item, LanguageTag):
        return tag == item
    text = item.strip()
    if "_" in text:
        try:
            return tag == LanguageTag.parse(text)
        except InvalidTag as exc:
            raise UnknownQueryCode(f"malformed tag in query: {text!r}") from exc
    row = table.get(text.casefold())
    if row is None:
        raise UnknownQueryCode(f"query code not in ISO table: {text!r}")
    if tag.language == row.iso639_3:
        return True
    # macrolanguage queries also select their listed individual members
    return row.scope == "Macrolanguage" and tag.language in table.members_of(row.iso639_3)


def match_query(
    query: Iterable[str | LanguageTag],
    registry,
    table: IsoTable | None = None,
) -> dict[str, list[str]]:
    """Select benchmark subsets whose aligned tag matches any query item.

    A bare ISO 639-3 code matches every script variant of that language; a
    full ``lang_Script`` tag matches exactly; macrolanguage codes match
    their individual members as well. Returns original labels per
    benchmark id, sorted, for benchmarks with at least one hit.
    """
    table = table or load_default_table()
    items = list(query)
    out: dict[str, list[str]] = {}
    for descriptor in registry:
        hits = sorted(
            label
            for label, tag in descriptor.lang_dict.items()
            if any(_match_one(tag, item, table) for item in items)
        )
        if hits:
            out[descriptor.id] = hits
    return out


def write_alignment_report(records: Iterable[AlignmentRecord], path: str | Path) -> None:
    """One JSON object per line, fields exactly as the report contract."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict(), ensure_ascii=False) + "\n")
