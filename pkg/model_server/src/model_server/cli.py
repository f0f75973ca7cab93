"""model-server command line: serve a toy or local transformer backend."""

from __future__ import annotations

import argparse
import sys

from model_server.server import run_forever
from model_server.toy import ToyBackend, ToySpec


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="model-server", description=__doc__)
    parser.add_argument("command", nargs="?", default="serve", choices=["serve"])
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--toy", help="toy backend: echo | uniform:V | fixed:<json logit table>")
    group.add_argument("--model", help="local transformer model id or path (needs the hf extra)")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8009)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.toy:
        try:
            backend = ToyBackend(ToySpec.parse(args.toy))
        except ValueError as exc:
            print(f"model-server: {exc}", file=sys.stderr)
            return 1
    else:
        try:
            from model_server.hf import HfBackend
        except ImportError as exc:
            print(f"model-server: transformer mode needs torch/transformers: {exc}", file=sys.stderr)
            return 1
        try:
            backend = HfBackend.from_pretrained(args.model)
        except Exception as exc:
            print(f"model-server: cannot load model {args.model!r}: {exc}", file=sys.stderr)
            return 1
    return run_forever(backend, args.host, args.port)


if __name__ == "__main__":
    sys.exit(main())
