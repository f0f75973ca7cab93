"""Dataset readers for the three supported on-disk formats."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from polyeval.errors import PolyevalError
from polyeval.langid.tags import LanguageTag
from polyeval.registry.descriptors import BenchmarkDescriptor


class MissingFile(PolyevalError):
    pass


class RaggedParallelData(PolyevalError):
    pass


class MalformedRow(PolyevalError):
    def __init__(self, path: str, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


@dataclass
class Sample:
    """One evaluation item, format-independent."""

    benchmark_id: str
    index: int
    input_text: str
    references: list[str] = field(default_factory=list)
    label: str | None = None
    tokens: list[str] | None = None
    tags: list[str] | None = None
    gender: str | None = None
    source_tag: LanguageTag | None = None
    target_tag: LanguageTag | None = None


def _labels_for_tag(descriptor: BenchmarkDescriptor, tag: LanguageTag) -> list[str]:
    return sorted(label for label, t in descriptor.lang_dict.items() if t == tag)


def _data_path(descriptor: BenchmarkDescriptor, label: str) -> Path:
    suffix = {
        "ParallelPerLanguageFiles": ".txt",
        "JsonlRecords": ".jsonl",
        "TokenTag2Col": ".tsv",
    }[descriptor.data_format]
    return descriptor.root_path / f"{label}{suffix}"


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise MissingFile(f"dataset file not found: {path}")
    return path.read_text(encoding="utf-8").splitlines()


def _check_alignment(descriptor: BenchmarkDescriptor) -> None:
    """MultiAligned benchmarks must have equal line counts across languages."""
    counts = {}
    for label in descriptor.lang_dict:
        counts[label] = len(_read_lines(_data_path(descriptor, label)))
    if len(set(counts.values())) > 1:
        raise RaggedParallelData(f"{descriptor.id}: per-language line counts differ: {counts}")


def _parallel_lines(descriptor: BenchmarkDescriptor, label: str) -> list[str]:
    lines = _read_lines(_data_path(descriptor, label))
    if descriptor.alignment_mode == "MultiAligned":
        _check_alignment(descriptor)
    return lines


def _jsonl_records(descriptor: BenchmarkDescriptor, label: str) -> list[dict]:
    path = _data_path(descriptor, label)
    records = []
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedRow(str(path), line_no, f"invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise MalformedRow(str(path), line_no, "record is not a JSON object")
        records.append(obj)
    return records


def _tokentag_sentences(descriptor: BenchmarkDescriptor, label: str) -> list[tuple[list[str], list[str]]]:
    path = _data_path(descriptor, label)
    sentences: list[tuple[list[str], list[str]]] = []
    tokens: list[str] = []
    tags: list[str] = []
    for line_no, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            if tokens:
                sentences.append((tokens, tags))
                tokens, tags = [], []
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0]:
            raise MalformedRow(str(path), line_no, f"expected 'token<TAB>tag', got {line!r}")
        tokens.append(parts[0])
        tags.append(parts[1])
    if tokens:
        sentences.append((tokens, tags))
    return sentences


def load_samples(
    descriptor: BenchmarkDescriptor,
    tag: LanguageTag,
    limit: int | None = None,
) -> list[Sample]:
    """Read one language subset; ``limit`` truncates from the head.

    The subset is the first original label aligned to ``tag`` (labels
    mapping to the same tag are duplicates of each other by construction).
    ``Sample.index`` is the 0-based position in the source file.
    """
    labels = _labels_for_tag(descriptor, tag)
    if not labels:
        raise MissingFile(f"{descriptor.id}: tag {tag} not in aligned language dictionary")
    label = labels[0]

    samples: list[Sample] = []
    if descriptor.data_format == "ParallelPerLanguageFiles":
        for i, line in enumerate(_parallel_lines(descriptor, label)):
            samples.append(Sample(descriptor.id, i, line, source_tag=tag))
    elif descriptor.data_format == "JsonlRecords":
        fmap = descriptor.field_map
        path = str(_data_path(descriptor, label))
        for i, obj in enumerate(_jsonl_records(descriptor, label)):
            sample = Sample(descriptor.id, i, "", source_tag=tag)
            try:
                sample.input_text = str(obj[fmap.get("input_text", "input_text")])
            except KeyError as exc:
                raise MalformedRow(path, i + 1, f"missing key {exc}") from None
            if "label" in fmap and fmap["label"] in obj:
                sample.label = str(obj[fmap["label"]])
            if "references" in fmap and fmap["references"] in obj:
                refs = obj[fmap["references"]]
                sample.references = [str(r) for r in refs] if isinstance(refs, list) else [str(refs)]
            if "gender" in fmap and fmap["gender"] in obj:
                sample.gender = str(obj[fmap["gender"]])
            samples.append(sample)
    else:  # TokenTag2Col
        for i, (tokens, tags) in enumerate(_tokentag_sentences(descriptor, label)):
            samples.append(
                Sample(
                    descriptor.id,
                    i,
                    " ".join(tokens),
                    tokens=tokens,
                    tags=tags,
                    source_tag=tag,
                )
            )

    return samples[:limit] if limit is not None else samples


def load_direction_samples(
    descriptor: BenchmarkDescriptor,
    source_tag: LanguageTag,
    target_tag: LanguageTag,
    limit: int | None = None,
) -> list[Sample]:
    """Zip two aligned subsets into translation pairs (source -> reference)."""
    src = load_samples(descriptor, source_tag, limit=limit)
    tgt = load_samples(descriptor, target_tag, limit=limit)
    if len(src) != len(tgt):
        raise RaggedParallelData(
            f"{descriptor.id}: {source_tag}->{target_tag} subsets differ in length ({len(src)} vs {len(tgt)})"
        )
    pairs = []
    for s, t in zip(src, tgt):
        pairs.append(
            Sample(
                benchmark_id=descriptor.id,
                index=s.index,
                input_text=s.input_text,
                references=[t.input_text],
                source_tag=source_tag,
                target_tag=target_tag,
            )
        )
    return pairs
