"""Run orchestration: config, execution, post-processing, report export."""

from polyeval.orchestrator.config import RunConfig
from polyeval.orchestrator.postprocess import postprocess, postprocess_tags
from polyeval.orchestrator.run import (
    BackendUnavailable,
    NoBenchmarkMatched,
    RunSummary,
    run,
)
from polyeval.orchestrator.reports import OutputDirNotWritable, emit_reports

__all__ = [
    "RunConfig",
    "run",
    "RunSummary",
    "postprocess",
    "postprocess_tags",
    "emit_reports",
    "NoBenchmarkMatched",
    "BackendUnavailable",
    "OutputDirNotWritable",
]
