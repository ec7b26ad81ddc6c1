"""Command-line entry point: embed a dataset's text field into an .embm file."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import __version__
from .errors import EmbedError
from .extract import EmbedJob, embed_traces

log = logging.getLogger("cotembed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cotembed",
        description="Mean-pooled transformer embeddings for reasoning traces (.embm output)",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--input", required=True, help="JSONL dataset")
    parser.add_argument("--text-field", default="generation", help="record key to embed")
    parser.add_argument("--model", required=True, help="model identifier or local path")
    parser.add_argument("--revision", help="model revision to pin")
    parser.add_argument("--out", required=True, help="output .embm path")
    parser.add_argument("--batch", type=int, default=8)
    parser.add_argument("--max-len", type=int, default=4096)
    parser.add_argument("--device", default="cpu", choices=("cpu", "cuda", "auto"))
    parser.add_argument("--strategy", help="condensation strategy recorded in metadata")
    parser.add_argument("--tau", type=float, help="condensation ratio recorded in metadata")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(message)s")
    job = EmbedJob(
        input_path=args.input,
        output_path=args.out,
        model_id=args.model,
        text_field=args.text_field,
        batch_size=args.batch,
        max_length=args.max_len,
        device=args.device,
        revision=args.revision,
        strategy=args.strategy,
        tau=args.tau,
    )
    try:
        manifest = embed_traces(job)
    except (EmbedError, OSError) as exc:
        log.error("%s", exc)
        return 1
    print(json.dumps(manifest, indent=2))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
