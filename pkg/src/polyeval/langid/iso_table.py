"""Bundled ISO 639-3 code table and its lookup indexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from polyeval.errors import PolyevalError

_COLUMNS = [
    "iso639_3",
    "iso639_2B",
    "iso639_2T",
    "iso639_1",
    "scope",
    "macro_parent",
    "reference_name",
    "alt_names",
]


class BadIsoTable(PolyevalError):
    pass


def normalize_name(name: str) -> str:
    """Case-fold and unify ``-``/``_``/space separators for name matching."""
    out = name.strip().casefold()
    for sep in "-_":
        out = out.replace(sep, " ")
    return " ".join(out.split())


@dataclass(frozen=True)
class IsoRow:
    iso639_3: str
    iso639_2B: str
    iso639_2T: str
    iso639_1: str
    scope: str  # Individual | Macrolanguage
    macro_parent: str  # iso639_3 of the macrolanguage, or ""
    reference_name: str
    alt_names: tuple[str, ...]

    def codes(self) -> set[str]:
        return {c for c in (self.iso639_3, self.iso639_2B, self.iso639_2T, self.iso639_1) if c}

    def names(self) -> tuple[str, ...]:
        return (self.reference_name, *self.alt_names)


@dataclass
class IsoTable:
    """Immutable lookup structure over the bundled code rows.

    Indexes are built once at load; all queries are read-only, so a single
    table instance may be shared freely across threads.
    """

    rows: list[IsoRow]
    _by_code: dict[str, IsoRow] = field(init=False, repr=False)
    _by_name: dict[str, list[IsoRow]] = field(init=False, repr=False)
    _members: dict[str, list[str]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        by_id: dict[str, IsoRow] = {}
        by_code: dict[str, IsoRow] = {}
        by_name: dict[str, list[IsoRow]] = {}
        members: dict[str, list[str]] = {}
        for row in self.rows:
            if row.iso639_3 in by_id:
                raise BadIsoTable(f"duplicate iso639_3 code: {row.iso639_3}")
            by_id[row.iso639_3] = row
        for row in self.rows:
            if row.macro_parent:
                parent = by_id.get(row.macro_parent)
                if parent is None or parent.scope != "Macrolanguage":
                    raise BadIsoTable(
                        f"{row.iso639_3}: macro_parent {row.macro_parent!r} is not a macrolanguage row"
                    )
                members.setdefault(row.macro_parent, []).append(row.iso639_3)
            for code in row.codes():
                other = by_code.get(code)
                if other is not None and other is not row:
                    raise BadIsoTable(f"code {code!r} owned by both {other.iso639_3} and {row.iso639_3}")
                by_code[code] = row
            for name in row.names():
                by_name.setdefault(normalize_name(name), []).append(row)
        self._by_code = by_code
        self._by_name = by_name
        self._members = {k: sorted(v) for k, v in members.items()}

    def __len__(self) -> int:
        return len(self.rows)

    def by_code(self, code: str) -> IsoRow | None:
        """Exact lookup across ISO 639-1 / 639-2B / 639-2T / 639-3 codes."""
        return self._by_code.get(code.strip().casefold())

    def by_name(self, name: str) -> IsoRow | None:
        """Exact lookup over reference and alternate names (case-folded).

        Ambiguous names resolve by: reference-name owner first, then
        Individual scope, then lexicographic iso639_3.
        """
        hits = self._by_name.get(normalize_name(name))
        if not hits:
            return None
        norm = normalize_name(name)

        def rank(row: IsoRow) -> tuple[int, int, str]:
            is_ref = 0 if normalize_name(row.reference_name) == norm else 1
            is_ind = 0 if row.scope == "Individual" else 1
            return (is_ref, is_ind, row.iso639_3)

        return min(hits, key=rank)

    def get(self, iso639_3: str) -> IsoRow | None:
        row = self._by_code.get(iso639_3)
        return row if row is not None and row.iso639_3 == iso639_3 else None

    def members_of(self, macro: str) -> list[str]:
        """Individual members of a macrolanguage listed in the table."""
        return list(self._members.get(macro, ()))


def parse_table(text: str) -> IsoTable:
    rows: list[IsoRow] = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.rstrip("\n").split("\t")
        if not header_seen:
            if parts != _COLUMNS:
                raise BadIsoTable(f"unexpected header: {parts}")
            header_seen = True
            continue
        if len(parts) != len(_COLUMNS):
            raise BadIsoTable(f"line {lineno}: expected {len(_COLUMNS)} columns, got {len(parts)}")
        pt3, b2b, b2t, b1, scope, macro, ref, alts = parts
        if scope not in ("Individual", "Macrolanguage"):
            raise BadIsoTable(f"line {lineno}: bad scope {scope!r}")
        rows.append(
            IsoRow(
                iso639_3=pt3,
                iso639_2B=b2b,
                iso639_2T=b2t,
                iso639_1=b1,
                scope=scope,
                macro_parent=macro,
                reference_name=ref,
                alt_names=tuple(a for a in alts.split(";") if a),
            )
        )
    return IsoTable(rows)


def load_table(path: str | Path) -> IsoTable:
    return parse_table(Path(path).read_text(encoding="utf-8"))


_DEFAULT: IsoTable | None = None


def load_default_table() -> IsoTable:
    """The TSV shipped with the package, parsed once per process."""
    global _DEFAULT
    if _DEFAULT is None:
        data = resources.files("polyeval.langid").joinpath("data/iso639_3.tsv")
        _DEFAULT = parse_table(data.read_text(encoding="utf-8"))
    return _DEFAULT
