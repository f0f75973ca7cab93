"""Benchmark descriptors, dataset loading, and direction enumeration."""

from polyeval.registry.descriptors import (
    BenchmarkDescriptor,
    DuplicateId,
    SchemaViolation,
    load_descriptor,
    load_registry,
)
from polyeval.registry.samples import (
    MalformedRow,
    MissingFile,
    RaggedParallelData,
    Sample,
    load_direction_samples,
    load_samples,
)
from polyeval.registry.directions import (
    Direction,
    NotATranslationBenchmark,
    PivotNotInBenchmark,
    declared_directions,
    enumerate_directions,
)

__all__ = [
    "BenchmarkDescriptor",
    "load_registry",
    "load_descriptor",
    "SchemaViolation",
    "DuplicateId",
    "Sample",
    "load_samples",
    "load_direction_samples",
    "MissingFile",
    "RaggedParallelData",
    "MalformedRow",
    "Direction",
    "enumerate_directions",
    "declared_directions",
    "PivotNotInBenchmark",
    "NotATranslationBenchmark",
]
