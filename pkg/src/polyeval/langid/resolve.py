"""Exact and fuzzy resolution of benchmark language labels."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from polyeval.errors import PolyevalError
from polyeval.langid.iso_table import IsoRow, IsoTable, load_default_table, normalize_name
from polyeval.langid.tags import LanguageTag

# Accept a fuzzy hit only at normalized similarity >= this.
FUZZY_THRESHOLD = 0.8

_REGION_SUFFIX = re.compile(r"[-_]([A-Z]{2})$")
_SCRIPT_SUFFIX = re.compile(r"[-_]([A-Z][a-z]{3})$")


class EmptyLabel(PolyevalError):
    pass


class MatchKind(str, enum.Enum):
    EXACT = "Exact"
    FUZZY = "Fuzzy"
    NO_MATCH = "NoMatch"


@dataclass
class AlignmentRecord:
    """Outcome of resolving one original benchmark label.

    ``language`` is the matched ISO 639-3 code; ``script`` is filled from a
    label suffix, a descriptor override, or corpus detection (in that
    order) and may still be None for a bare ``resolve_language`` call.
    ``candidates`` carry bare ISO 639-3 codes: a script cannot be known for
    labels that did not resolve.
    """

    source_label: str
    language: str | None
    match_kind: MatchKind
    scope: str  # Individual | Macrolanguage | Unknown
    confidence: float
    candidates: list[tuple[str, float]] = field(default_factory=list)
    script: str | None = None
    stripped_suffix: str | None = None
    detected_script: str | None = None
    note: str | None = None

    @property
    def resolved(self) -> LanguageTag | None:
        if self.language is None or self.script is None:
            return None
        return LanguageTag(self.language, self.script)

    def to_json_dict(self) -> dict:
        """The six-field report row written to alignment JSONL files."""
        return {
            "source_label": self.source_label,
            "resolved": str(self.resolved) if self.resolved else None,
            "match_kind": self.match_kind.value,
            "scope": self.scope,
            "confidence": round(self.confidence, 6),
            "candidates": [[code, round(conf, 6)] for code, conf in self.candidates],
        }


def edit_distance(a: str, b: str) -> int:
    """Plain Levenshtein distance (unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def name_similarity(query: str, name: str) -> float:
    """Normalized similarity of a label against one table name.

    Uses 1 - edit_distance/max_len over case-folded strings. Multi-word
    reference names are additionally matched word by word, so a label like
    "Mandarin" scores 1.0 against "Mandarin Chinese" (still a fuzzy match,
    since the label does not equal the full name).
    """
    q = normalize_name(query)
    m = normalize_name(name)
    if not q or not m:
        return 0.0
    targets = [m]
    if " " in m:
        targets.extend(m.split())
    best = 0.0
    for t in targets:
        denom = max(len(q), len(t))
        best = max(best, 1.0 - edit_distance(q, t) / denom)
    return best


def strip_suffix(label: str) -> tuple[str, str | None, str | None]:
    """Remove one trailing region (``-CN``) or script (``_Latn``) suffix.

    Returns (body, stripped_suffix, script_from_suffix).
    """
    m = _SCRIPT_SUFFIX.search(label)
    if m and len(label) > len(m.group(0)):
        return label[: m.start()], m.group(0), m.group(1)
    m = _REGION_SUFFIX.search(label)
    if m and len(label) > len(m.group(0)):
        return label[: m.start()], m.group(0), None
    return label, None, None


def _scope_of(row: IsoRow) -> str:
    return row.scope


def _rank_key(row: IsoRow) -> tuple[int, str]:
    # ties: Individual over Macrolanguage, then lexicographic iso639_3
    return (0 if row.scope == "Individual" else 1, row.iso639_3)


def resolve_language(label: str, table: IsoTable | None = None) -> AlignmentRecord:
    """Resolve one original label to an ISO 639-3 code.

    Matching is case-insensitive and treats ``-``/``_``/space as the same
    separator. Exact hits are code or name equality; otherwise the best
    name similarity >= FUZZY_THRESHOLD wins as a fuzzy match; otherwise the
    label is reported unmatched with up to three ranked suggestions.
    """
    table = table or load_default_table()
    raw = label.strip()
    if not raw:
        raise EmptyLabel("language label is empty")

    body, suffix, suffix_script = strip_suffix(raw)

    row = table.by_code(body)
    if row is None:
        row = table.by_name(body)
    if row is not None:
        return AlignmentRecord(
            source_label=label,
            language=row.iso639_3,
            match_kind=MatchKind.EXACT,
            scope=row.scope,
            confidence=1.0,
            candidates=[(row.iso639_3, 1.0)],
            script=suffix_script,
            stripped_suffix=suffix,
        )

    scored: list[tuple[float, IsoRow]] = []
    for cand in table.rows:
        sim = max(name_similarity(body, name) for name in cand.names())
        if sim > 0.0:
            scored.append((sim, cand))
    scored.sort(key=lambda sc: (-sc[0], _rank_key(sc[1])))
    candidates = [(r.iso639_3, s) for s, r in scored[:3]]

    if scored and scored[0][0] >= FUZZY_THRESHOLD:
        best_sim, best_row = scored[0]
        return AlignmentRecord(
            source_label=label,
            language=best_row.iso639_3,
            match_kind=MatchKind.FUZZY,
            scope=best_row.scope,
            confidence=best_sim,
            candidates=candidates,
            script=suffix_script,
            stripped_suffix=suffix,
        )

    return AlignmentRecord(
        source_label=label,
        language=None,
        match_kind=MatchKind.NO_MATCH,
        scope="Unknown",
        confidence=0.0,
        candidates=candidates,
        script=suffix_script,
        stripped_suffix=suffix,
    )
