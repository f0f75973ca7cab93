"""The wire protocol: request/response shapes and their validation.

Three POST endpoints plus a health check:

    /v1/generate       {"kind": "Generate", "prompt", "max_new_tokens", "stop"}
                    -> {"output_text", "generated_token_count"}
    /v1/score_choices  {"kind": "ScoreChoices", "prompt", "choices"}
                    -> {"choice_logits", "choice_logprob_sums"}
    /v1/token_nll      {"kind": "TokenNll", "text"}
                    -> {"token_logprobs", "token_count"}
    /v1/health (GET)   -> {"status": "ok"}

Bodies are UTF-8 JSON with exactly the fields of their kind; token counts
are whatever the server's own tokenizer produces. The same contract is
published as a JSON schema in ``schemas/wire-protocol.schema.json`` for
out-of-process implementations.
"""

from __future__ import annotations

from numbers import Real

from polyeval.errors import PolyevalError

ENDPOINTS = {
    "Generate": "/v1/generate",
    "ScoreChoices": "/v1/score_choices",
    "TokenNll": "/v1/token_nll",
}
HEALTH_ENDPOINT = "/v1/health"

_REQUEST_FIELDS = {
    "Generate": {"kind", "prompt", "max_new_tokens", "stop"},
    "ScoreChoices": {"kind", "prompt", "choices"},
    "TokenNll": {"kind", "text"},
}
_RESPONSE_FIELDS = {
    "Generate": {"output_text", "generated_token_count"},
    "ScoreChoices": {"choice_logits", "choice_logprob_sums"},
    "TokenNll": {"token_logprobs", "token_count"},
}


class ProtocolError(PolyevalError):
    pass


def make_request(kind: str, **fields) -> dict:
    payload = {"kind": kind, **fields}
    validate_request(payload)
    return payload


def validate_request(payload: dict) -> None:
    kind = payload.get("kind")
    if kind not in _REQUEST_FIELDS:
        raise ProtocolError(f"unknown request kind: {kind!r}")
    expected = _REQUEST_FIELDS[kind]
    if set(payload) != expected:
        raise ProtocolError(f"{kind} request must have fields {sorted(expected)}, got {sorted(payload)}")
    if kind == "Generate":
        if not isinstance(payload["max_new_tokens"], int) or payload["max_new_tokens"] < 0:
            raise ProtocolError("max_new_tokens must be a non-negative integer")
        if not isinstance(payload["stop"], list):
            raise ProtocolError("stop must be a list of strings")
    if kind == "ScoreChoices" and not isinstance(payload["choices"], list):
        raise ProtocolError("choices must be a list of strings")


def validate_response(kind: str, payload: dict, request: dict | None = None) -> None:
    """Shape-check a server response; list lengths must match the request."""
    if kind not in _RESPONSE_FIELDS:
        raise ProtocolError(f"unknown response kind: {kind!r}")
    if not isinstance(payload, dict):
        raise ProtocolError(f"{kind} response is not a JSON object")
    expected = _RESPONSE_FIELDS[kind]
    if set(payload) != expected:
        raise ProtocolError(f"{kind} response must have fields {sorted(expected)}, got {sorted(payload)}")
    if kind == "Generate":
        if not isinstance(payload["output_text"], str):
            raise ProtocolError("output_text must be a string")
        if not isinstance(payload["generated_token_count"], int) or payload["generated_token_count"] < 0:
            raise ProtocolError("generated_token_count must be a non-negative integer")
    elif kind == "ScoreChoices":
        logits = payload["choice_logits"]
        sums = payload["choice_logprob_sums"]
        if not _real_list(logits) or not _real_list(sums) or len(logits) != len(sums):
            raise ProtocolError("choice_logits/choice_logprob_sums must be equal-length numeric lists")
        if request is not None and len(logits) != len(request["choices"]):
            raise ProtocolError("choice_logits length must match the requested choices")
    else:  # TokenNll
        logprobs = payload["token_logprobs"]
        if not _real_list(logprobs):
            raise ProtocolError("token_logprobs must be a numeric list")
        if payload["token_count"] != len(logprobs):
            raise ProtocolError("token_count must equal len(token_logprobs)")


def _real_list(value) -> bool:
    return isinstance(value, list) and all(isinstance(x, Real) and not isinstance(x, bool) for x in value)
