"""polyeval command-line interface."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from polyeval.errors import PolyevalError
from polyeval.langid.align import align_benchmark, write_alignment_report
from polyeval.langid.iso_table import load_default_table
from polyeval.langid.tags import LanguageTag
from polyeval.orchestrator.config import RunConfig
from polyeval.orchestrator.reports import emit_reports
from polyeval.orchestrator.run import _raw_lines, run
from polyeval.promptlib.propagate import HttpTranslationClient, IdentityTranslator, propagate_template
from polyeval.promptlib.templates import PromptLibrary, PromptStrategy
from polyeval.registry.descriptors import load_registry

_DIRECTION_MODES = {"any-to-pivot": "AnyToPivot", "pivot-to-any": "PivotToAny", "both": "Both"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyeval", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute an evaluation run")
    p_run.add_argument("--config", type=Path, help="JSON run config file")
    p_run.add_argument("--benchmarks", help="comma-separated benchmark ids, or 'all'")
    p_run.add_argument("--langs", help="comma-separated language codes/tags, e.g. zho,spa_Latn")
    p_run.add_argument("--prompt-strategy", choices=["single", "multi"])
    p_run.add_argument("--prompt-lang", help="prompt language tag for the single strategy")
    p_run.add_argument("--pivot", help="pivot tag for multi-aligned translation, e.g. eng_Latn")
    p_run.add_argument("--direction-mode", choices=sorted(_DIRECTION_MODES))
    p_run.add_argument("--n-shot", type=int)
    p_run.add_argument("--sample-limit", type=int)
    p_run.add_argument("--parallelism", type=int)
    p_run.add_argument("--store-details", action="store_true", default=None)
    p_run.add_argument("--backend-url")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--out", type=Path, help="output directory")

    p_align = sub.add_parser("align", help="emit a language alignment report for one benchmark")
    p_align.add_argument("--benchmark", required=True)
    p_align.add_argument("--registry", type=Path, default=Path("benchmarks"))
    p_align.add_argument("--out", type=Path, help="report path (default alignment_<id>.jsonl)")
    p_align.add_argument("--seed", type=int, default=42)

    p_prompts = sub.add_parser("prompts", help="prompt library tooling")
    prompts_sub = p_prompts.add_subparsers(dest="prompts_command", required=True)
    p_prop = prompts_sub.add_parser("propagate", help="machine-translate a template to other languages")
    p_prop.add_argument("--task", required=True, help="task kind, e.g. Translation")
    p_prop.add_argument("--from", dest="source", required=True, help="source tag, e.g. eng_Latn")
    p_prop.add_argument("--to", required=True, help="comma-separated target tags, or 'all'")
    p_prop.add_argument("--library", type=Path, default=Path("prompts"))
    p_prop.add_argument("--translator-url", default="identity:", help="translation service URL ('identity:' = mock)")
    p_prop.add_argument("--registry", type=Path, help="registry dir used to expand --to all")
    return parser


def _apply_run_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    if args.benchmarks:
        config.benchmarks = [b.strip() for b in args.benchmarks.split(",") if b.strip()]
    if args.langs:
        config.langs = [x.strip() for x in args.langs.split(",") if x.strip()]
    if args.prompt_strategy:
        lang = config.prompt_strategy.single_language
        if args.prompt_lang:
            lang = LanguageTag.parse(args.prompt_lang)
        config.prompt_strategy = PromptStrategy(args.prompt_strategy, lang if args.prompt_strategy == "single" else None)
    elif args.prompt_lang:
        config.prompt_strategy = PromptStrategy("single", LanguageTag.parse(args.prompt_lang))
    if args.pivot:
        config.pivot = LanguageTag.parse(args.pivot)
    if args.direction_mode:
        config.direction_mode = _DIRECTION_MODES[args.direction_mode]
    if args.n_shot is not None:
        config.n_shot = args.n_shot
    if args.sample_limit is not None:
        config.sample_limit = args.sample_limit
    if args.parallelism is not None:
        config.parallelism = args.parallelism
    if args.store_details is not None:
        config.store_details = args.store_details
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.output_dir = args.out
    return config


def _cmd_run(args: argparse.Namespace) -> int:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    config = _apply_run_overrides(config, args)
    summary = run(config, backend_url=args.backend_url)
    files = emit_reports(summary, config)
    for benchmark in summary.benchmarks:
        status = f"ERROR: {benchmark.error}" if benchmark.error else f"{len(benchmark.subsets)} subsets"
        print(f"[{benchmark.id}] {benchmark.task_kind}: {status}")
    for kind, path in sorted(files.items()):
        print(f"wrote {kind}: {path}")
    return 0 if summary.ok else 1


def _cmd_align(args: argparse.Namespace) -> int:
    registry = load_registry(args.registry)
    matches = [d for d in registry if d.id == args.benchmark]
    if not matches:
        print(f"benchmark {args.benchmark!r} not found in {args.registry}", file=sys.stderr)
        return 1
    descriptor = matches[0]
    table = load_default_table()
    _aligned, report = align_benchmark(
        descriptor, lambda label: _raw_lines(descriptor, label), table=table, seed=args.seed
    )
    out = args.out or Path(f"alignment_{descriptor.id}.jsonl")
    write_alignment_report(report, out)
    for record in report:
        resolved = str(record.resolved) if record.resolved else "-"
        print(f"{record.source_label:20} {record.match_kind.value:8} {resolved:12} ({record.scope})")
    print(f"wrote report: {out}")
    return 0


def _cmd_propagate(args: argparse.Namespace) -> int:
    library = PromptLibrary.load(args.library) if args.library.is_dir() else PromptLibrary()
    source_tag = LanguageTag.parse(args.source)
    template = library.get(args.task, source_tag)
    if template is None:
        print(f"no {source_tag} template for task {args.task!r} in {args.library}", file=sys.stderr)
        return 1

    if args.to == "all":
        if args.registry and args.registry.is_dir():
            table = load_default_table()
            tags: set[str] = set()
            from polyeval.orchestrator.run import ensure_aligned

            for descriptor in load_registry(args.registry):
                ensure_aligned(descriptor, table, seed=42)
                tags.update(str(t) for t in descriptor.lang_dict.values())
        else:
            tags = set(library.tags_for(args.task))
        targets = [LanguageTag.parse(t) for t in sorted(tags) if t != str(source_tag)]
    else:
        targets = [LanguageTag.parse(t.strip()) for t in args.to.split(",") if t.strip()]
    if not targets:
        print("no propagation targets", file=sys.stderr)
        return 1

    if args.translator_url.startswith("identity:"):
        translator = IdentityTranslator()
    else:
        translator = HttpTranslationClient(args.translator_url)
    accepted, failures = propagate_template(template, targets, translator)
    for tag, tmpl in accepted.items():
        library.add(tmpl)
        print(f"{tag}: ok ({tmpl.provenance})")
    for tag, reason in failures.items():
        print(f"{tag}: FAILED {reason}")
    library.save(args.library)
    print(f"library updated: {args.library}")
    return 0 if not failures else 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "align":
            return _cmd_align(args)
        return _cmd_propagate(args)
    except PolyevalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
