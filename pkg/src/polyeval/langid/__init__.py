"""Language label normalization to canonical ``ISO639-3_Script`` tags."""

from polyeval.langid.tags import LanguageTag
from polyeval.langid.iso_table import IsoRow, IsoTable, load_default_table
from polyeval.langid.resolve import (
    AlignmentRecord,
    EmptyLabel,
    MatchKind,
    resolve_language,
)
from polyeval.langid.script import NoScriptEvidence, detect_script
from polyeval.langid.align import (
    UnknownQueryCode,
    align_benchmark,
    match_query,
    write_alignment_report,
)

__all__ = [
    "LanguageTag",
    "IsoRow",
    "IsoTable",
    "load_default_table",
    "AlignmentRecord",
    "MatchKind",
    "EmptyLabel",
    "resolve_language",
    "detect_script",
    "NoScriptEvidence",
    "align_benchmark",
    "match_query",
    "UnknownQueryCode",
    "write_alignment_report",
]
