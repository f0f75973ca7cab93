"""Canonical language identity: ISO 639-3 code plus ISO 15924 script."""

from __future__ import annotations

import re
from dataclasses import dataclass

from polyeval.errors import PolyevalError

_LANG_RE = re.compile(r"[a-z]{3}")
_SCRIPT_RE = re.compile(r"[A-Z][a-z]{3}")


class InvalidTag(PolyevalError):
    pass


@dataclass(frozen=True, order=True)
class LanguageTag:
    """An ``ISO639-3_Script`` pair, e.g. ``eng_Latn``.

    The language part is a lowercase 3-letter ISO 639-3 code, the script a
    titlecase 4-letter ISO 15924 code. Validation of the language against
    the bundled code table is the caller's job (see ``IsoTable.require``);
    this class enforces shape only.
    """

    language: str
    script: str

    def __post_init__(self) -> None:
        if not _LANG_RE.fullmatch(self.language):
            raise InvalidTag(f"bad ISO 639-3 code: {self.language!r}")
        if not _SCRIPT_RE.fullmatch(self.script):
            raise InvalidTag(f"bad ISO 15924 code: {self.script!r}")

    def __str__(self) -> str:
        return f"{self.language}_{self.script}"

    @classmethod
    def parse(cls, text: str) -> "LanguageTag":
        """Parse a canonical ``lang_Script`` rendering."""
        lang, sep, script = text.partition("_")
        if not sep:
            raise InvalidTag(f"not a canonical tag (missing script): {text!r}")
        return cls(lang, script)
