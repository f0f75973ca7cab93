"""Run configuration: file values, CLI overrides, env overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from polyeval.errors import PolyevalError
from polyeval.langid.tags import LanguageTag
from polyeval.promptlib.templates import PromptStrategy

ENV_BACKEND_URL = "POLYEVAL_BACKEND_URL"


@dataclass
class RunConfig:
    """Everything one evaluation run depends on.

    ``benchmarks`` is a list of ids or ``["all"]``; ``langs`` restricts
    subsets via cross-benchmark language queries (empty = no restriction).
    ``timing`` chooses real wall clocks or the deterministic virtual clock
    used by fixture runs so reports are byte-reproducible.
    """

    registry_dir: Path = Path("benchmarks")
    prompt_library_dir: Path = Path("prompts")
    output_dir: Path = Path("runs/out")
    benchmarks: list[str] = field(default_factory=lambda: ["all"])
    langs: list[str] = field(default_factory=list)
    prompt_strategy: PromptStrategy = field(default_factory=lambda: PromptStrategy("multi"))
    pivot: LanguageTag | None = None
    direction_mode: str = "Both"
    n_shot: int = 0
    sample_limit: int | None = None
    parallelism: int = 1
    store_details: bool = False
    backend_url: str = "stub:echo"
    translator_url: str | None = None
    seed: int = 42
    timing: str = "real"
    nll_window: int = 1024
    nll_stride: int = 512

    def __post_init__(self) -> None:
        if self.n_shot < 0:
            raise PolyevalError("n_shot must be >= 0")
        if self.parallelism < 1:
            raise PolyevalError("parallelism must be >= 1")
        if self.direction_mode not in ("AnyToPivot", "PivotToAny", "Both"):
            raise PolyevalError(f"bad direction_mode: {self.direction_mode!r}")
        if self.timing not in ("real", "deterministic"):
            raise PolyevalError(f"bad timing mode: {self.timing!r}")

    @classmethod
    def from_file(cls, path: str | Path) -> "RunConfig":
        path = Path(path)
        data = json.loads(path.read_text(encoding="utf-8"))
        return cls.from_dict(data, base_dir=path.parent)

    @classmethod
    def from_dict(cls, data: dict, base_dir: Path | None = None) -> "RunConfig":
        def respath(value: str) -> Path:
            p = Path(value)
            return p if p.is_absolute() or base_dir is None else base_dir / p

        kwargs: dict = {}
        for key in ("registry_dir", "prompt_library_dir", "output_dir"):
            if key in data:
                kwargs[key] = respath(data[key])
        for key in (
            "benchmarks",
            "langs",
            "direction_mode",
            "n_shot",
            "sample_limit",
            "parallelism",
            "store_details",
            "backend_url",
            "translator_url",
            "seed",
            "timing",
            "nll_window",
            "nll_stride",
        ):
            if key in data:
                kwargs[key] = data[key]
        if "prompt_strategy" in data:
            strat = data["prompt_strategy"]
            lang = strat.get("language")
            kwargs["prompt_strategy"] = PromptStrategy(
                strat["mode"], LanguageTag.parse(lang) if lang else None
            )
        if data.get("pivot"):
            kwargs["pivot"] = LanguageTag.parse(data["pivot"])
        return cls(**kwargs)

    def resolved_backend_url(self, cli_value: str | None = None) -> str:
        """Precedence: CLI flag, then $POLYEVAL_BACKEND_URL, then config."""
        if cli_value:
            return cli_value
        return os.environ.get(ENV_BACKEND_URL) or self.backend_url

    def echo_dict(self) -> dict:
        """The experiment-defining fields echoed into summary.json.

        Scheduling and environment knobs (parallelism, backend URL, output
        paths) are left out on purpose: reports must be identical across
        parallelism levels and across wire-compatible backends.
        """
        return {
            "benchmarks": list(self.benchmarks),
            "langs": list(self.langs),
            "prompt_strategy": {
                "mode": self.prompt_strategy.mode,
                "language": str(self.prompt_strategy.single_language)
                if self.prompt_strategy.single_language
                else None,
            },
            "pivot": str(self.pivot) if self.pivot else None,
            "direction_mode": self.direction_mode,
            "n_shot": self.n_shot,
            "sample_limit": self.sample_limit,
            "store_details": self.store_details,
            "seed": self.seed,
            "timing": self.timing,
            "nll_window": self.nll_window,
            "nll_stride": self.nll_stride,
        }
