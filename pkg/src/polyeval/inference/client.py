"""Wire clients (HTTP and in-process stub), batching, and label ranking."""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Protocol, Sequence

import requests

from polyeval.errors import PolyevalError
from polyeval.inference.stub import ToyModel, ToyModelSpec
from polyeval.inference.wire import ENDPOINTS, HEALTH_ENDPOINT, ProtocolError, make_request, validate_response

DEFAULT_TIMEOUT = 120.0
DEFAULT_RETRIES = 2

# Deterministic-timing constants: virtual seconds per request and per token.
_DET_BASE = 0.01
_DET_PER_TOKEN = 0.001


class Timeout(PolyevalError):
    pass


class ServerError(PolyevalError):
    def __init__(self, status: int, message: str = ""):
        self.status = status
        super().__init__(f"server returned HTTP {status}{': ' + message if message else ''}")


class EmptyLabelSet(PolyevalError):
    pass


def processed_tokens(kind: str, response: dict) -> int:
    """Token count a request contributes to throughput accounting.

    Choice scoring counts one token per request (the selected label), the
    convention behind per-sample cells in non-generative throughput tables.
    """
    if kind == "Generate":
        return response["generated_token_count"]
    if kind == "TokenNll":
        return response["token_count"]
    return 1


class WireClient(Protocol):
    timing: str

    def request(self, payload: dict) -> tuple[dict, float]:
        """Send one validated request; return (response, wall_time)."""
        ...

    def health_check(self) -> bool: ...


def _wall_time(timing: str, kind: str, response: dict, elapsed: float) -> float:
    if timing == "deterministic":
        return _DET_BASE + _DET_PER_TOKEN * processed_tokens(kind, response)
    return elapsed


class StubWireClient:
    """In-process client over a ToyModel; no sockets involved.

    ``timing="deterministic"`` derives wall times from token counts so
    repeated runs produce byte-identical reports.
    """

    def __init__(self, spec: ToyModelSpec | str, timing: str = "deterministic"):
        self.model = ToyModel(ToyModelSpec.parse(spec) if isinstance(spec, str) else spec)
        self.timing = timing

    def request(self, payload: dict) -> tuple[dict, float]:
        kind = payload["kind"]
        start = time.perf_counter()
        response = self.model.handle(payload)
        elapsed = time.perf_counter() - start
        validate_response(kind, response, payload)
        return response, _wall_time(self.timing, kind, response, elapsed)

    def health_check(self) -> bool:
        return True


class HttpWireClient:
    """HTTP driver with bounded retries and exponential backoff.

    A timed-out attempt is retried up to ``retries`` times; only the final
    successful response enters any downstream accounting, so retries never
    double-count tokens.
    """

    def __init__(
        self,
        base_url: str,
        timeout: float = DEFAULT_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        backoff: float = 0.25,
        timing: str = "real",
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self.timing = timing
        self._local = threading.local()

    def _session(self) -> requests.Session:
        if not hasattr(self._local, "session"):
            self._local.session = requests.Session()
        return self._local.session

    def request(self, payload: dict) -> tuple[dict, float]:
        kind = payload["kind"]
        url = self.base_url + ENDPOINTS[kind]
        last_exc: Exception | None = None
        for attempt in range(self.retries + 1):
            start = time.perf_counter()
            try:
                resp = self._session().post(url, json=payload, timeout=self.timeout)
            except requests.Timeout as exc:
                last_exc = exc
                if attempt < self.retries:
                    time.sleep(self.backoff * (2**attempt))
                continue
            except requests.RequestException as exc:
                raise ServerError(0, f"transport failure: {exc}") from exc
            elapsed = time.perf_counter() - start
            if resp.status_code != 200:
                raise ServerError(resp.status_code, resp.text[:200])
            try:
                body = resp.json()
            except ValueError as exc:
                raise ProtocolError(f"response is not JSON: {exc}") from exc
            validate_response(kind, body, payload)
            return body, _wall_time(self.timing, kind, body, elapsed)
        raise Timeout(f"{kind} request timed out after {self.retries + 1} attempts") from last_exc

    def health_check(self) -> bool:
        try:
            resp = self._session().get(self.base_url + HEALTH_ENDPOINT, timeout=min(self.timeout, 10.0))
            return resp.status_code == 200
        except requests.RequestException:
            return False


def client_for_url(url: str, timing: str = "real", **http_kwargs) -> WireClient:
    """``stub:<toy spec>`` gives the in-process backend, anything else HTTP."""
    if url.startswith("stub:"):
        return StubWireClient(url.split(":", 1)[1], timing=timing)
    return HttpWireClient(url, timing=timing, **http_kwargs)


@dataclass
class GenerateResult:
    output_text: str
    generated_token_count: int
    wall_time: float


def generate(
    client: WireClient,
    prompt: str,
    max_new_tokens: int,
    stop: Sequence[str] = (),
) -> GenerateResult:
    """One generation call; stop-string truncation is re-verified client-side."""
    payload = make_request("Generate", prompt=prompt, max_new_tokens=max_new_tokens, stop=list(stop))
    response, wall = client.request(payload)
    text = response["output_text"]
    for marker in stop:
        idx = text.find(marker)
        if idx != -1:
            text = text[:idx]
    return GenerateResult(text, response["generated_token_count"], wall)


def rank_labels(client: WireClient, prompt: str, labels: Sequence[str]) -> tuple[int, dict]:
    """Pick a label by first-token logit; argmax of ``choice_logits``.

    Labels sharing a first token surface as exactly tied logits; those ties
    fall back to the full-sequence logprob sums, and exact equality there
    resolves to the lowest index.
    """
    labels = list(labels)
    if not labels:
        raise EmptyLabelSet("rank_labels needs at least one label")
    if len(set(labels)) != len(labels):
        raise EmptyLabelSet("labels must be distinct")
    payload = make_request("ScoreChoices", prompt=prompt, choices=labels)
    response, wall = client.request(payload)
    logits = response["choice_logits"]
    sums = response["choice_logprob_sums"]
    best = max(logits)
    tied = [i for i, v in enumerate(logits) if v == best]
    if len(tied) > 1:
        best_sum = max(sums[i] for i in tied)
        tied = [i for i in tied if sums[i] == best_sum]
    chosen = tied[0]
    return chosen, {"choice_logits": logits, "choice_logprob_sums": sums, "wall_time": wall}


def run_batch(
    client: WireClient,
    payloads: Sequence[dict],
    parallelism: int = 1,
) -> list[tuple[dict, float]]:
    """Execute requests with bounded parallelism; results keep submission order."""
    if parallelism < 1:
        raise PolyevalError("parallelism must be >= 1")
    if parallelism == 1 or len(payloads) <= 1:
        return [client.request(p) for p in payloads]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        return list(pool.map(client.request, payloads))
