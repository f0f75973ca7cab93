"""Pivot-centric enumeration of translation directions."""

from __future__ import annotations

from dataclasses import dataclass

from polyeval.errors import PolyevalError
from polyeval.langid.tags import LanguageTag
from polyeval.registry.descriptors import BenchmarkDescriptor

MODES = ("AnyToPivot", "PivotToAny", "Both")


class PivotNotInBenchmark(PolyevalError):
    pass


class NotATranslationBenchmark(PolyevalError):
    pass


@dataclass(frozen=True, order=True)
class Direction:
    source: LanguageTag
    target: LanguageTag

    def __post_init__(self) -> None:
        if self.source == self.target:
            raise PolyevalError(f"direction source equals target: {self.source}")

    def __str__(self) -> str:
        return f"{self.source}->{self.target}"


def enumerate_directions(
    descriptor: BenchmarkDescriptor,
    pivot: LanguageTag,
    mode: str = "Both",
) -> list[Direction]:
    """Directions against a pivot for a multi-aligned translation benchmark.

    AnyToPivot yields (x -> pivot) for every other aligned tag x,
    PivotToAny yields (pivot -> x), Both concatenates them in that order.
    Non-pivot tags are taken in canonical tag order, so the list is stable.
    """
    if descriptor.task_kind != "Translation":
        raise NotATranslationBenchmark(f"{descriptor.id} is {descriptor.task_kind}, not Translation")
    if mode not in MODES:
        raise PolyevalError(f"direction mode must be one of {MODES}, got {mode!r}")
    if descriptor.alignment_mode == "Pairwise":
        raise NotATranslationBenchmark(
            f"{descriptor.id} declares explicit pairs; use declared_directions()"
        )
    tags = sorted(set(descriptor.lang_dict.values()), key=str)
    if pivot not in tags:
        raise PivotNotInBenchmark(f"pivot {pivot} not among aligned tags of {descriptor.id}")
    others = [t for t in tags if t != pivot]
    to_pivot = [Direction(x, pivot) for x in others]
    from_pivot = [Direction(pivot, x) for x in others]
    if mode == "AnyToPivot":
        return to_pivot
    if mode == "PivotToAny":
        return from_pivot
    return to_pivot + from_pivot


def declared_directions(descriptor: BenchmarkDescriptor) -> list[Direction]:
    """Directed pairs declared by a pairwise benchmark descriptor."""
    if descriptor.task_kind != "Translation":
        raise NotATranslationBenchmark(f"{descriptor.id} is {descriptor.task_kind}, not Translation")
    out = []
    for src_label, tgt_label in descriptor.pairs:
        try:
            out.append(Direction(descriptor.lang_dict[src_label], descriptor.lang_dict[tgt_label]))
        except KeyError as exc:
            raise PivotNotInBenchmark(f"{descriptor.id}: pair label {exc} is not aligned") from None
    return out
