"""Benchmark descriptor schema, parsing, and validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from polyeval.errors import PolyevalError
from polyeval.langid.tags import InvalidTag, LanguageTag
from polyeval.metrics import known_metric

TASK_KINDS = (
    "Translation",
    "Classification",
    "TokenClassification",
    "Summarization",
    "OpenGeneration",
    "Comprehension",
    "Intrinsic",
)
ALIGNMENT_MODES = ("MultiAligned", "Pairwise", "Monolingual")
DATA_FORMATS = ("ParallelPerLanguageFiles", "JsonlRecords", "TokenTag2Col")

_REQUIRED_KEYS = ("id", "task_kind", "alignment_mode", "data_format", "root_path", "labels", "metrics")
_OPTIONAL_KEYS = ("script_overrides", "field_map", "pairs", "lang_dict", "stop", "max_new_tokens")


class SchemaViolation(PolyevalError):
    def __init__(self, file: str, fieldname: str, message: str):
        self.file = file
        self.field = fieldname
        super().__init__(f"{file}: field {fieldname!r}: {message}")


class DuplicateId(PolyevalError):
    pass


@dataclass
class BenchmarkDescriptor:
    """One benchmark's task kind, data layout, metric set, and label mapping."""

    id: str
    task_kind: str
    alignment_mode: str
    data_format: str
    root_path: Path
    labels: list[str]
    metrics: list[str]
    script_overrides: dict[str, str] = field(default_factory=dict)
    field_map: dict[str, str] = field(default_factory=dict)
    pairs: list[tuple[str, str]] = field(default_factory=list)
    lang_dict: dict[str, LanguageTag] = field(default_factory=dict)
    stop: list[str] = field(default_factory=lambda: ["\n\n"])
    max_new_tokens: int = 256
    source_file: str = "<memory>"


def _expect(condition: bool, file: str, fieldname: str, message: str) -> None:
    if not condition:
        raise SchemaViolation(file, fieldname, message)


def parse_descriptor(data: dict, source_file: str, base_dir: Path | None = None) -> BenchmarkDescriptor:
    _expect(isinstance(data, dict), source_file, "<root>", "descriptor must be a JSON object")
    for key in _REQUIRED_KEYS:
        _expect(key in data, source_file, key, "missing required key")
    for key in data:
        _expect(
            key in _REQUIRED_KEYS or key in _OPTIONAL_KEYS,
            source_file,
            key,
            "unknown key",
        )

    _expect(isinstance(data["id"], str) and data["id"], source_file, "id", "must be a non-empty string")
    _expect(data["task_kind"] in TASK_KINDS, source_file, "task_kind", f"must be one of {TASK_KINDS}")
    _expect(
        data["alignment_mode"] in ALIGNMENT_MODES,
        source_file,
        "alignment_mode",
        f"must be one of {ALIGNMENT_MODES}",
    )
    _expect(data["data_format"] in DATA_FORMATS, source_file, "data_format", f"must be one of {DATA_FORMATS}")
    if data["task_kind"] == "Translation":
        _expect(
            data["alignment_mode"] != "Monolingual",
            source_file,
            "alignment_mode",
            "translation benchmarks cannot be monolingual",
        )

    labels = data["labels"]
    _expect(
        isinstance(labels, list) and labels and all(isinstance(x, str) for x in labels),
        source_file,
        "labels",
        "must be a non-empty list of strings",
    )
    _expect(len(set(labels)) == len(labels), source_file, "labels", "duplicate label")

    metrics = data["metrics"]
    _expect(
        isinstance(metrics, list) and metrics and all(isinstance(x, str) for x in metrics),
        source_file,
        "metrics",
        "must be a non-empty list of metric ids",
    )
    for metric_id in metrics:
        _expect(known_metric(metric_id), source_file, "metrics", f"unknown metric id {metric_id!r}")

    overrides = data.get("script_overrides", {}) or {}
    _expect(isinstance(overrides, dict), source_file, "script_overrides", "must be an object")
    for label, script in overrides.items():
        _expect(label in labels, source_file, "script_overrides", f"label {label!r} not in labels")
        _expect(
            isinstance(script, str) and len(script) == 4 and script[:1].isupper(),
            source_file,
            "script_overrides",
            f"bad ISO 15924 code {script!r}",
        )

    pairs_raw = data.get("pairs", []) or []
    _expect(isinstance(pairs_raw, list), source_file, "pairs", "must be a list of [src, tgt] pairs")
    pairs: list[tuple[str, str]] = []
    for pair in pairs_raw:
        _expect(
            isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair),
            source_file,
            "pairs",
            f"bad pair {pair!r}",
        )
        _expect(pair[0] in labels and pair[1] in labels, source_file, "pairs", f"pair {pair!r} uses unknown label")
        pairs.append((pair[0], pair[1]))
    if data["alignment_mode"] == "Pairwise":
        _expect(bool(pairs), source_file, "pairs", "pairwise benchmarks must declare pairs")

    lang_dict: dict[str, LanguageTag] = {}
    for label, tag in (data.get("lang_dict", {}) or {}).items():
        _expect(label in labels, source_file, "lang_dict", f"label {label!r} not in labels")
        try:
            lang_dict[label] = LanguageTag.parse(tag)
        except InvalidTag:
            raise SchemaViolation(source_file, "lang_dict", f"bad tag {tag!r}") from None

    stop = data.get("stop", ["\n\n"])
    _expect(
        isinstance(stop, list) and all(isinstance(x, str) and x for x in stop),
        source_file,
        "stop",
        "must be a list of non-empty strings",
    )
    max_new_tokens = data.get("max_new_tokens", 256)
    _expect(
        isinstance(max_new_tokens, int) and max_new_tokens >= 0,
        source_file,
        "max_new_tokens",
        "must be a non-negative integer",
    )

    root = Path(data["root_path"])
    if base_dir is not None and not root.is_absolute():
        root = base_dir / root

    return BenchmarkDescriptor(
        id=data["id"],
        task_kind=data["task_kind"],
        alignment_mode=data["alignment_mode"],
        data_format=data["data_format"],
        root_path=root,
        labels=list(labels),
        metrics=list(metrics),
        script_overrides=dict(overrides),
        field_map=dict(data.get("field_map", {}) or {}),
        pairs=pairs,
        lang_dict=lang_dict,
        stop=list(stop),
        max_new_tokens=max_new_tokens,
        source_file=source_file,
    )


def load_descriptor(path: str | Path) -> BenchmarkDescriptor:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolation(str(path), "<root>", f"invalid JSON: {exc}") from exc
    return parse_descriptor(data, str(path), base_dir=path.parent)


def load_registry(config_dir: str | Path) -> list[BenchmarkDescriptor]:
    """Parse every ``*.benchmark.json`` under a directory, in name order."""
    config_dir = Path(config_dir)
    descriptors = []
    ids: set[str] = set()
    for path in sorted(config_dir.glob("*.benchmark.json")):
        descriptor = load_descriptor(path)
        if descriptor.id in ids:
            raise DuplicateId(f"benchmark id {descriptor.id!r} declared more than once")
        ids.add(descriptor.id)
        descriptors.append(descriptor)
    return descriptors
