"""Strided sliding-window NLL over a token logprob stream."""

from __future__ import annotations

from dataclasses import dataclass

from polyeval.errors import PolyevalError
from polyeval.inference.wire import make_request

DEFAULT_WINDOW = 1024
DEFAULT_STRIDE = 512


class InvalidStride(PolyevalError):
    pass


@dataclass(frozen=True)
class NllWindowPlan:
    """Window segments (start, end, scored_from) over ``n`` tokens.

    Segment i covers tokens [i*stride, i*stride+window) clipped to n; the
    first segment scores from its start, later ones only their fresh tail
    [start + window - stride, end). Scored ranges partition [0, n).
    """

    window: int
    stride: int
    n_tokens: int
    segments: tuple[tuple[int, int, int], ...]


def plan_nll_windows(
    n_tokens: int,
    window: int = DEFAULT_WINDOW,
    stride: int = DEFAULT_STRIDE,
) -> NllWindowPlan:
    if n_tokens < 1:
        raise InvalidStride(f"n_tokens must be >= 1, got {n_tokens}")
    if stride <= 0 or stride > window:
        raise InvalidStride(f"need 0 < stride <= window, got stride={stride} window={window}")
    segments: list[tuple[int, int, int]] = []
    i = 0
    while True:
        start = i * stride
        end = min(start + window, n_tokens)
        scored_from = start if i == 0 else min(start + (window - stride), end)
        segments.append((start, end, scored_from))
        if end >= n_tokens:
            break
        i += 1
    return NllWindowPlan(window=window, stride=stride, n_tokens=n_tokens, segments=tuple(segments))


@dataclass
class NllResult:
    total_nll: float
    per_window_nlls: list[float]
    scored_token_counts: list[int]
    token_count: int
    wall_time: float


def compute_nll(
    client,
    text: str,
    window: int = DEFAULT_WINDOW,
    stride: int = DEFAULT_STRIDE,
) -> NllResult:
    """Corpus NLL = -sum log p(x_i | x_<i) within window context; not length-normalized.

    The server returns the teacher-forced logprob stream for the text; the
    window plan assigns each token to exactly one scored range, and the
    per-window sums are concatenated into the total. Servers with bounded
    context apply the same plan internally when producing the stream, so
    window boundaries line up on both sides.
    """
    if not text:
        raise PolyevalError("text must be non-empty")
    payload = make_request("TokenNll", text=text)
    response, wall = client.request(payload)
    logprobs = response["token_logprobs"]
    n = response["token_count"]
    if n == 0:
        return NllResult(0.0, [], [], 0, wall)
    plan = plan_nll_windows(n, window=window, stride=stride)
    per_window = []
    scored_counts = []
    for _start, end, scored_from in plan.segments:
        per_window.append(-sum(logprobs[scored_from:end]))
        scored_counts.append(end - scored_from)
    return NllResult(
        total_nll=sum(per_window),
        per_window_nlls=per_window,
        scored_token_counts=scored_counts,
        token_count=n,
        wall_time=wall,
    )
