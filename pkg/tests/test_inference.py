"""Wire clients, toy backend semantics, NLL windowing, throughput."""

import json
import math
import random
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyeval.inference import (
    EmptyLabelSet,
    HttpWireClient,
    InvalidStride,
    ProtocolError,
    ServerError,
    StubWireClient,
    Timeout,
    ToyModel,
    ToyModelSpec,
    ZeroWallTime,
    client_for_url,
    compute_nll,
    format_cell,
    generate,
    measure_throughput,
    plan_nll_windows,
    rank_labels,
    run_batch,
    validate_request,
    validate_response,
)


class TestToyModel:
    def test_echo_returns_final_line(self):
        model = ToyModel(ToyModelSpec("echo"))
        out = model.generate("Translate this:\nhello world", 16, [])
        assert out == {"output_text": "hello world", "generated_token_count": 2}

    def test_echo_max_tokens_zero(self):
        model = ToyModel(ToyModelSpec("echo"))
        out = model.generate("abc def", 0, [])
        assert out == {"output_text": "", "generated_token_count": 0}

    def test_echo_truncates_tokens(self):
        model = ToyModel(ToyModelSpec("echo"))
        out = model.generate("a b c d e", 3, [])
        assert out == {"output_text": "a b c", "generated_token_count": 3}

    def test_echo_stop_string(self):
        model = ToyModel(ToyModelSpec("echo"))
        out = model.generate("alpha STOP beta", 16, ["STOP"])
        assert out["output_text"] == "alpha "[: len(out["output_text"])]

    def test_uniform_token_nll(self):
        model = ToyModel(ToyModelSpec("uniform", vocab_size=8))
        out = model.token_nll("one two three four five")
        assert out["token_count"] == 5
        assert all(lp == pytest.approx(-math.log(8)) for lp in out["token_logprobs"])

    def test_fixed_logits_roundtrip(self):
        model = ToyModel(ToyModelSpec("fixed", fixed_logit_table={"yes": 2.0, "no": 1.0}))
        out = model.score_choices("p", ["yes", "no"])
        assert out["choice_logits"] == [2.0, 1.0]

    def test_spec_parsing(self):
        assert ToyModelSpec.parse("echo").mode == "echo"
        assert ToyModelSpec.parse("uniform:16").vocab_size == 16
        assert ToyModelSpec.parse('fixed:{"a": 1.5}').fixed_logit_table == {"a": 1.5}

    def test_determinism(self):
        model = ToyModel(ToyModelSpec("echo"))
        req = {"kind": "Generate", "prompt": "x\ny z", "max_new_tokens": 4, "stop": []}
        assert model.handle(dict(req)) == model.handle(dict(req))


class TestWireValidation:
    def test_request_exact_fields(self):
        validate_request({"kind": "TokenNll", "text": "x"})
        with pytest.raises(ProtocolError):
            validate_request({"kind": "TokenNll", "text": "x", "extra": 1})
        with pytest.raises(ProtocolError):
            validate_request({"kind": "Generate", "prompt": "x"})

    def test_response_lengths_match_request(self):
        req = {"kind": "ScoreChoices", "prompt": "p", "choices": ["a", "b"]}
        validate_response("ScoreChoices", {"choice_logits": [1.0, 2.0], "choice_logprob_sums": [0.1, 0.2]}, req)
        with pytest.raises(ProtocolError):
            validate_response("ScoreChoices", {"choice_logits": [1.0], "choice_logprob_sums": [0.1]}, req)

    def test_token_count_consistency(self):
        with pytest.raises(ProtocolError):
            validate_response("TokenNll", {"token_logprobs": [-1.0], "token_count": 2})

    def test_stub_responses_validate_against_shared_schema(self, schema_path):
        import jsonschema

        schema = json.loads(schema_path.read_text())
        model = ToyModel(ToyModelSpec("echo"))
        cases = [
            ("generate_response", model.generate("a\nb c", 8, [])),
            ("score_choices_response", model.score_choices("p b", ["b", "c"])),
            ("token_nll_response", model.token_nll("x y z")),
        ]
        for name, payload in cases:
            jsonschema.validate(payload, {**schema["$defs"][name], "$defs": schema["$defs"]})


class TestGenerateOp:
    def test_echo_prompt(self):
        result = generate(StubWireClient("echo"), "abc", 16)
        assert result.output_text == "abc"

    def test_client_side_stop_verify(self):
        result = generate(StubWireClient("echo"), "alpha STOP beta", 16, stop=["STOP"])
        assert "STOP" not in result.output_text

    def test_zero_tokens(self):
        result = generate(StubWireClient("echo"), "abc def", 0)
        assert (result.output_text, result.generated_token_count) == ("", 0)


class TestRankLabels:
    def test_fixed_logits_argmax(self):
        client = StubWireClient('fixed:{"yes": 2.0, "no": 1.0}')
        idx, scores = rank_labels(client, "prompt", ["yes", "no"])
        assert idx == 0
        assert scores["choice_logits"] == [2.0, 1.0]

    def test_single_label(self):
        idx, _ = rank_labels(StubWireClient('fixed:{"only": -5.0}'), "p", ["only"])
        assert idx == 0

    def test_exact_tie_lowest_index(self):
        client = StubWireClient('fixed:{"a": 1.0, "b": 1.0}')
        idx, _ = rank_labels(client, "p", ["a", "b"])
        assert idx == 0

    def test_tie_broken_by_logprob_sums(self):
        # uniform mode: all first-token logits 0, sums favor fewer tokens
        client = StubWireClient("uniform:4")
        idx, _ = rank_labels(client, "p", ["two words", "one"])
        assert idx == 1

    def test_shift_invariance(self):
        base = {"a": 1.0, "b": 3.0, "c": 2.0}
        shifted = {k: v + 100.0 for k, v in base.items()}
        i1, _ = rank_labels(StubWireClient("fixed:" + json.dumps(base)), "p", list(base))
        i2, _ = rank_labels(StubWireClient("fixed:" + json.dumps(shifted)), "p", list(base))
        assert i1 == i2 == 1

    def test_empty_and_duplicate_labels(self):
        with pytest.raises(EmptyLabelSet):
            rank_labels(StubWireClient("echo"), "p", [])
        with pytest.raises(EmptyLabelSet):
            rank_labels(StubWireClient("echo"), "p", ["x", "x"])


class TestWindowPlans:
    def test_single_window(self):
        plan = plan_nll_windows(800)
        assert plan.segments == ((0, 800, 0),)

    def test_two_windows_by_hand(self):
        plan = plan_nll_windows(1536, window=1024, stride=512)
        assert plan.segments == ((0, 1024, 0), (512, 1536, 1024))

    def test_invalid_stride(self):
        with pytest.raises(InvalidStride):
            plan_nll_windows(100, window=64, stride=0)
        with pytest.raises(InvalidStride):
            plan_nll_windows(100, window=64, stride=65)

    @staticmethod
    def _assert_partition(n, window, stride):
        plan = plan_nll_windows(n, window=window, stride=stride)
        covered = []
        for start, end, scored_from in plan.segments:
            assert start <= scored_from <= end
            assert end - start <= window
            covered.extend(range(scored_from, end))
        assert covered == list(range(n))

    @given(
        n=st.integers(min_value=1, max_value=5000),
        window=st.integers(min_value=1, max_value=2048),
        data=st.data(),
    )
    @settings(max_examples=200, deadline=None)
    def test_partition_property(self, n, window, data):
        stride = data.draw(st.integers(min_value=1, max_value=window))
        self._assert_partition(n, window, stride)

    def test_partition_1000_random_triples(self):
        rng = random.Random(98765)
        for _ in range(1000):
            window = rng.randint(1, 2048)
            stride = rng.randint(1, window)
            n = rng.randint(1, 8000)
            self._assert_partition(n, window, stride)


class TestComputeNll:
    @pytest.mark.parametrize("n", [1, 1023, 1024, 1025, 4096])
    def test_uniform_vocab_exact(self, n):
        client = StubWireClient("uniform:8")
        text = " ".join(["tok"] * n)
        result = compute_nll(client, text)
        assert result.total_nll == pytest.approx(n * math.log(8), abs=1e-9)
        assert result.token_count == n

    def test_short_text_single_window(self):
        client = StubWireClient("uniform:4")
        result = compute_nll(client, "a b c")
        assert len(result.per_window_nlls) == 1
        assert result.total_nll == pytest.approx(3 * math.log(4), abs=1e-9)

    def test_windowed_equals_no_window_oracle(self):
        """Full-context mock: windowed scored ranges cover each token once."""
        client = StubWireClient("uniform:8")
        n = 1536
        text = " ".join(["x"] * n)
        windowed = compute_nll(client, text, window=1024, stride=512)
        direct = compute_nll(client, text, window=10**9, stride=10**9)
        assert windowed.total_nll == pytest.approx(direct.total_nll, abs=1e-9)

    def test_nll_additivity_nonoverlapping(self):
        client = StubWireClient("uniform:16")
        text = " ".join(["x"] * 300)
        result = compute_nll(client, text, window=100, stride=100)
        assert len(result.per_window_nlls) == 3
        assert result.total_nll == pytest.approx(sum(result.per_window_nlls))

    def test_ppl_round_trip(self):
        from polyeval.metrics import aggregate_nll

        client = StubWireClient("uniform:8")
        n = 500
        result = compute_nll(client, " ".join(["t"] * n))
        report = aggregate_nll(result.per_window_nlls, result.scored_token_counts)
        assert report.subgroup_scores["ppl"] == pytest.approx(math.exp(result.total_nll / n))
        assert report.subgroup_scores["ppl"] == pytest.approx(8.0)


class TestThroughput:
    def test_plain_division(self):
        assert measure_throughput(100, 2.0) == 50.0

    def test_zero_tokens(self):
        assert measure_throughput(0, 1.0) == 0.0

    def test_zero_wall_time(self):
        with pytest.raises(ZeroWallTime):
            measure_throughput(10, 0.0)

    def test_cell_format_matches_reference_row(self):
        # a published French FLORES throughput cell: 854 tokens, 969.55 tok/s
        wall = 854 / 969.55
        assert format_cell(854, wall) == "854 / 0.88 = 969.55"

    def test_cell_shape(self):
        import re

        assert re.fullmatch(r"\d+ / \d+\.\d{2} = \d+\.\d{2}", format_cell(12, 0.034))


class _Handler(BaseHTTPRequestHandler):
    behavior = "ok"
    hits = 0

    def do_POST(self):
        type(self).hits += 1
        length = int(self.headers["Content-Length"])
        json.loads(self.rfile.read(length))
        if type(self).behavior == "error500":
            self.send_response(500)
            self.end_headers()
            self.wfile.write(b"boom")
            return
        if type(self).behavior == "malformed":
            body = b'{"not": "the contract"}'
        elif type(self).behavior == "slow_once" and type(self).hits == 1:
            time.sleep(1.0)
            body = json.dumps({"output_text": "late", "generated_token_count": 1}).encode()
        else:
            body = json.dumps({"output_text": "ok ok", "generated_token_count": 2}).encode()
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        self.send_response(200)
        self.end_headers()
        self.wfile.write(b'{"status": "ok"}')

    def log_message(self, *args):
        pass


@pytest.fixture()
def http_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    _Handler.behavior = "ok"
    _Handler.hits = 0
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()


class TestHttpClient:
    def test_ok_roundtrip(self, http_server):
        client = HttpWireClient(http_server)
        assert client.health_check()
        result = generate(client, "x", 8)
        assert result.output_text == "ok ok"

    def test_server_error_500(self, http_server):
        _Handler.behavior = "error500"
        client = HttpWireClient(http_server)
        with pytest.raises(ServerError) as exc:
            generate(client, "x", 8)
        assert exc.value.status == 500

    def test_malformed_response(self, http_server):
        _Handler.behavior = "malformed"
        client = HttpWireClient(http_server)
        with pytest.raises(ProtocolError):
            generate(client, "x", 8)

    def test_timeout_retry_succeeds_and_counts_once(self, http_server):
        _Handler.behavior = "slow_once"
        client = HttpWireClient(http_server, timeout=0.3, retries=2, backoff=0.0)
        result = generate(client, "x", 8)
        assert result.generated_token_count == 2  # one response, tokens counted once
        assert _Handler.hits == 2  # first attempt timed out, one retry

    def test_timeout_exhausted(self):
        class Never(BaseHTTPRequestHandler):
            def do_POST(self):
                time.sleep(2.0)

            def log_message(self, *args):
                pass

        server = ThreadingHTTPServer(("127.0.0.1", 0), Never)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        try:
            client = HttpWireClient(
                f"http://127.0.0.1:{server.server_address[1]}", timeout=0.15, retries=1, backoff=0.0
            )
            with pytest.raises(Timeout):
                generate(client, "x", 8)
        finally:
            server.shutdown()

    def test_unreachable_health(self):
        assert not HttpWireClient("http://127.0.0.1:9", timeout=0.2).health_check()


class TestBatching:
    @pytest.mark.parametrize("parallelism", [1, 4])
    def test_order_matches_submission(self, parallelism):
        client = StubWireClient("echo")
        payloads = [
            {"kind": "Generate", "prompt": f"line {i}", "max_new_tokens": 8, "stop": []}
            for i in range(20)
        ]
        results = run_batch(client, payloads, parallelism)
        assert [r["output_text"] for r, _ in results] == [f"line {i}" for i in range(20)]

    def test_order_with_variable_latency(self):
        class JitterClient:
            timing = "real"

            def __init__(self):
                self.inner = StubWireClient("echo")
                self.rng = random.Random(0)
                self.lock = threading.Lock()

            def request(self, payload):
                with self.lock:
                    delay = self.rng.random() * 0.02
                time.sleep(delay)
                return self.inner.request(payload)

            def health_check(self):
                return True

        payloads = [
            {"kind": "Generate", "prompt": f"p {i}", "max_new_tokens": 4, "stop": []}
            for i in range(12)
        ]
        results = run_batch(JitterClient(), payloads, parallelism=4)
        assert [r["output_text"] for r, _ in results] == [f"p {i}" for i in range(12)]


class TestClientFactory:
    def test_stub_scheme(self):
        client = client_for_url("stub:uniform:8", timing="deterministic")
        assert isinstance(client, StubWireClient)
        assert client.model.spec.vocab_size == 8

    def test_http_scheme(self):
        assert isinstance(client_for_url("http://localhost:1234"), HttpWireClient)

    def test_deterministic_timing_is_reproducible(self):
        client = StubWireClient("echo", timing="deterministic")
        payload = {"kind": "Generate", "prompt": "a b c", "max_new_tokens": 8, "stop": []}
        _, w1 = client.request(dict(payload))
        _, w2 = client.request(dict(payload))
        assert w1 == w2 > 0
