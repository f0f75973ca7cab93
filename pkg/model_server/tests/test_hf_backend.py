"""Transformer-backend math, driven by a tiny random model (no downloads)."""

import math

import pytest

torch = pytest.importorskip("torch")
transformers = pytest.importorskip("transformers")

from model_server.hf import HfBackend, window_segments

VOCAB = 64


class WordTokenizer:
    """Whitespace tokenizer with a fixed hash vocabulary, for tests only."""

    bos_token_id = 0
    eos_token_id = None

    def encode(self, text: str) -> list[int]:
        return [1 + (hash(w) % (VOCAB - 1)) for w in text.split()]

    def decode(self, ids: list[int]) -> str:
        return " ".join(f"w{i}" for i in ids)


@pytest.fixture(scope="module")
def backend():
    torch.manual_seed(0)
    config = transformers.GPT2Config(
        vocab_size=VOCAB, n_positions=64, n_embd=32, n_layer=2, n_head=2
    )
    model = transformers.GPT2LMHeadModel(config)
    return HfBackend(model, WordTokenizer(), window=16, stride=8)


class TestWindowSegments:
    def test_partition(self):
        for n, window, stride in [(1, 16, 8), (16, 16, 8), (17, 16, 8), (100, 16, 8), (100, 16, 16)]:
            covered = [i for _s, end, sf in window_segments(n, window, stride) for i in range(sf, end)]
            assert covered == list(range(n))


class TestGenerate:
    def test_greedy_deterministic(self, backend):
        req = ("tell me something nice", 6, [])
        assert backend.generate(*req) == backend.generate(*req)

    def test_respects_max_new_tokens(self, backend):
        out = backend.generate("a b c", 3, [])
        assert out["generated_token_count"] <= 3

    def test_zero_tokens(self, backend):
        assert backend.generate("a b c", 0, []) == {"output_text": "", "generated_token_count": 0}


class TestScoreChoices:
    def test_first_token_logits_match_manual_forward(self, backend):
        prompt = "one two three"
        choices = ["four five", "six"]
        got = backend.score_choices(prompt, choices)
        ids = backend.tokenizer.encode(prompt)
        with torch.no_grad():
            logits = backend.model(torch.tensor([ids])).logits[0, -1]
        for choice, logit in zip(choices, got["choice_logits"]):
            first = backend.tokenizer.encode(choice)[0]
            assert logit == pytest.approx(float(logits[first]), rel=1e-5)

    def test_sum_is_teacher_forced_logprob(self, backend):
        prompt = "one two"
        choice = "three four"
        got = backend.score_choices(prompt, [choice])
        prompt_ids = backend.tokenizer.encode(prompt)
        choice_ids = backend.tokenizer.encode(choice)
        with torch.no_grad():
            full = backend.model(torch.tensor([prompt_ids + choice_ids])).logits[0]
        logprobs = torch.log_softmax(full, dim=-1)
        want = sum(
            float(logprobs[len(prompt_ids) - 1 + k, token_id])
            for k, token_id in enumerate(choice_ids)
        )
        assert got["choice_logprob_sums"][0] == pytest.approx(want, rel=1e-4)


class TestTokenNll:
    def test_counts_and_finiteness(self, backend):
        out = backend.token_nll("a b c d e f g")
        assert out["token_count"] == 7 == len(out["token_logprobs"])
        assert all(math.isfinite(lp) and lp <= 0.0 for lp in out["token_logprobs"])

    def test_short_text_matches_manual_forward(self, backend):
        text = "alpha beta gamma"
        out = backend.token_nll(text)
        ids = backend.tokenizer.encode(text)
        with torch.no_grad():
            logits = backend.model(torch.tensor([[WordTokenizer.bos_token_id] + ids])).logits[0]
        logprobs = torch.log_softmax(logits, dim=-1)
        want = [float(logprobs[k, token_id]) for k, token_id in enumerate(ids)]
        assert out["token_logprobs"] == pytest.approx(want, rel=1e-4)

    def test_long_text_windows_cover_every_token(self, backend):
        text = " ".join(f"tok{i % 9}" for i in range(50))  # longer than window=16
        out = backend.token_nll(text)
        assert out["token_count"] == 50
        assert all(lp != 0.0 for lp in out["token_logprobs"])  # every position scored
