"""Model-server driver over the fixed HTTP JSON wire protocol."""

from polyeval.inference.wire import (
    ENDPOINTS,
    ProtocolError,
    validate_request,
    validate_response,
)
from polyeval.inference.stub import ToyModel, ToyModelSpec
from polyeval.inference.client import (
    EmptyLabelSet,
    GenerateResult,
    HttpWireClient,
    ServerError,
    StubWireClient,
    Timeout,
    WireClient,
    client_for_url,
    generate,
    rank_labels,
    run_batch,
)
from polyeval.inference.nll import (
    InvalidStride,
    NllResult,
    NllWindowPlan,
    compute_nll,
    plan_nll_windows,
)
from polyeval.inference.throughput import ZeroWallTime, format_cell, measure_throughput

__all__ = [
    "ENDPOINTS",
    "ProtocolError",
    "validate_request",
    "validate_response",
    "ToyModel",
    "ToyModelSpec",
    "WireClient",
    "HttpWireClient",
    "StubWireClient",
    "client_for_url",
    "generate",
    "rank_labels",
    "run_batch",
    "GenerateResult",
    "Timeout",
    "ServerError",
    "EmptyLabelSet",
    "NllWindowPlan",
    "NllResult",
    "plan_nll_windows",
    "compute_nll",
    "InvalidStride",
    "measure_throughput",
    "format_cell",
    "ZeroWallTime",
]
