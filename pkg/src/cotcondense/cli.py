"""Command-line interface.

One binary, five subcommands: ``condense``, ``perturb``, ``mi`` (plus
``mi validate`` for header checks), ``stats`` and ``validate-mi``.

Reports are JSON on stdout (or ``--report FILE``); human-readable logs go
to stderr. Exit codes: 0 success, 1 validation or parse failure, 2
degenerate-math failure. A ``--config FILE`` JSON object supplies
defaults; explicit flags override it.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass

from . import __version__
from .condense import STRATEGIES, condense_dataset
from .dataset import FieldMap
from .embfile import describe_embm, read_embm
from .errors import CotCondenseError, DegenerateMathError, DomainError
from .lexicon import ReflectionLexicon
from .mi import DEFAULT_K, estimate_mi
from .perturb import (
    REGIONS,
    PerturbationConfig,
    load_sentence_pool,
    perturb_dataset,
)
from .stats import compute_stats
from .trace import DEFAULT_DELIMITER
from .validate import gaussian_mi_check

log = logging.getLogger("cotcondense")

_CONFIG_KEYS = (
    "question_field",
    "trace_field",
    "answer_field",
    "id_field",
    "delimiter",
    "lexicon",
    "seed",
    "threads",
)


class _Parser(argparse.ArgumentParser):
    # Usage errors are validation failures: exit 1, not argparse's 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self.exit_with(message))

    @staticmethod
    def exit_with(message):
        print(f"error: {message}", file=sys.stderr)
        return 1


def unescape_delimiter(raw: str) -> str:
    """Interpret backslash escapes so shells can pass '\\n\\n' literally."""
    return raw.replace("\\r", "\r").replace("\\n", "\n").replace("\\t", "\t")


@dataclass(frozen=True)
class GlobalConfig:
    """Resolved common settings handed to every subcommand."""

    fields: FieldMap
    delimiter: str
    lexicon_path: str | None
    seed: int | None
    threads: int
    report_path: str | None

    def lexicon(self) -> ReflectionLexicon:
        if self.lexicon_path:
            return ReflectionLexicon.from_file(self.lexicon_path)
        return ReflectionLexicon.default()


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as handle:
        config = json.load(handle)
    if not isinstance(config, dict):
        raise DomainError("config file must contain a JSON object")
    unknown = set(config) - set(_CONFIG_KEYS)
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")
    return config


def _resolve(args) -> GlobalConfig:
    config = _load_config_file(getattr(args, "config", None))

    def pick(flag_name, config_key, default):
        flag = getattr(args, flag_name, None)
        if flag is not None:
            return flag
        if config_key in config:
            return config[config_key]
        return default

    fields = FieldMap(
        question=pick("question_field", "question_field", "problem"),
        trace=pick("trace_field", "trace_field", "generation"),
        answer=pick("answer_field", "answer_field", "answer"),
        id=pick("id_field", "id_field", "id"),
    )
    delimiter = unescape_delimiter(pick("delimiter", "delimiter", DEFAULT_DELIMITER))
    threads = pick("threads", "threads", os.cpu_count() or 1)
    return GlobalConfig(
        fields=fields,
        delimiter=delimiter,
        lexicon_path=pick("lexicon", "lexicon", None),
        seed=pick("seed", "seed", None),
        threads=int(threads),
        report_path=getattr(args, "report", None),
    )


def _emit_report(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, ensure_ascii=False)
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
        log.info("report written to %s", path)
    else:
        print(text)


def _common_flags(parser: argparse.ArgumentParser, fields: bool = True) -> None:
    parser.add_argument("--config", help="JSON config file with default settings")
    parser.add_argument("--report", help="write the JSON report here instead of stdout")
    parser.add_argument("--seed", type=int, help="seed for all randomness in this run")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    if fields:
        parser.add_argument("--question-field", help="record key for the question (default: problem)")
        parser.add_argument("--trace-field", help="record key for the trace (default: generation)")
        parser.add_argument("--answer-field", help="record key for the answer (default: answer)")
        parser.add_argument("--id-field", help="record key for the id (default: id)")
        parser.add_argument("--delimiter", help=r"thought delimiter, backslash escapes allowed (default: \n\n)")
        parser.add_argument("--threads", type=int, help="worker threads (default: all cores)")
        parser.add_argument(
            "--on-error",
            choices=("skip", "fail"),
            default="skip",
            help="skip bad records with a report entry, or stop at the first",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cotcondense", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("condense", help="condense every trace in a dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--strategy", required=True, choices=STRATEGIES)
    p.add_argument("--ratio", required=True, help="fraction of thoughts to retain, in (0, 1]")
    p.add_argument(
        "--min-keep",
        choices=("on", "off"),
        default="on",
        help="retain boundary thoughts when a formula would keep nothing (default: on)",
    )
    _common_flags(p)

    p = sub.add_parser("perturb", help="replace thought content in a region, keeping markers")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--region", required=True, choices=REGIONS)
    p.add_argument("--fraction", default="0.5", help="fraction of the trace to perturb (default: 0.5)")
    p.add_argument("--pool", required=True, help="plain-text corpus supplying replacement sentences")
    p.add_argument("--lexicon", help="reflection lexicon file (default: built-in markers)")
    p.add_argument(
        "--match-length",
        choices=("approximate",),
        help="draw sentences until within 30%% of the replaced span's length",
    )
    _common_flags(p)

    p = sub.add_parser("mi", help="mutual information between two .embm files")
    p.add_argument("--a", dest="file_a", help="first embedding matrix (.embm)")
    p.add_argument("--b", dest="file_b", help="second embedding matrix (.embm)")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--jitter", type=float, help="uniform noise magnitude for tie-breaking (e.g. 1e-10)")
    p.add_argument("--standardize", action="store_true", help="per-column standardization first")
    p.add_argument("--allow-dim-mismatch", action="store_true")
    _common_flags(p, fields=False)
    mi_sub = p.add_subparsers(dest="mi_command")
    v = mi_sub.add_parser("validate", help="check .embm headers")
    v.add_argument("files", nargs="+")
    v.add_argument("--report")

    p = sub.add_parser("stats", help="dataset-level descriptive statistics")
    p.add_argument("--input", required=True)
    p.add_argument("--lexicon", help="reflection lexicon file (default: built-in markers)")
    _common_flags(p)

    p = sub.add_parser("validate-mi", help="self-test the estimator on correlated Gaussians")
    p.add_argument("--m", type=int, default=2000)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--rho", type=float, default=0.9)
    _common_flags(p, fields=False)

    return parser


def _run_condense(args, cfg: GlobalConfig) -> int:
    report = condense_dataset(
        args.input,
        args.output,
        strategy=args.strategy,
        tau=args.ratio,
        delimiter=cfg.delimiter,
        seed=cfg.seed,
        min_keep=args.min_keep == "on",
        fields=cfg.fields,
        on_error=args.on_error,
        threads=cfg.threads,
    )
    log.info(
        "condensed %d examples: %d -> %d thoughts (retention %.4f)",
        report.example_count,
        report.thoughts_before,
        report.thoughts_after,
        report.retention,
    )
    _emit_report(report.to_dict(), cfg.report_path)
    return 0


def _run_perturb(args, cfg: GlobalConfig) -> int:
    if cfg.seed is None:
        raise DomainError("perturb requires --seed")
    lexicon = ReflectionLexicon.from_file(args.lexicon) if args.lexicon else cfg.lexicon()
    pool = load_sentence_pool(args.pool, lexicon)
    config = PerturbationConfig(
        region=args.region,
        fraction=float(args.fraction),
        lexicon=lexicon,
        sentence_pool=pool,
        seed=cfg.seed,
        match_length=args.match_length,
    )
    report = perturb_dataset(
        args.input,
        args.output,
        config,
        delimiter=cfg.delimiter,
        fields=cfg.fields,
        on_error=args.on_error,
        threads=cfg.threads,
    )
    log.info(
        "perturbed %d thoughts across %d examples",
        report.perturbed_thoughts,
        report.example_count,
    )
    _emit_report(report.to_dict(), cfg.report_path)
    return 0


def _run_mi(args, cfg: GlobalConfig) -> int:
    if getattr(args, "mi_command", None) == "validate":
        reports = [describe_embm(path) for path in args.files]
        _emit_report({"schema_version": 1, "report": "embm-validate", "files": reports}, args.report)
        return 0
    if not args.file_a or not args.file_b:
        raise DomainError("mi requires --a and --b (or the validate subcommand)")
    matrix_a = read_embm(args.file_a)
    matrix_b = read_embm(args.file_b)
    estimate = estimate_mi(
        matrix_a,
        matrix_b,
        k=args.k,
        jitter=args.jitter,
        jitter_seed=cfg.seed or 0,
        standardize=args.standardize,
        allow_dim_mismatch=args.allow_dim_mismatch,
    )
    log.info("I(A; B) = %.6f nats (k=%d, m=%d)", estimate.value, estimate.k, estimate.m)
    _emit_report(estimate.to_dict(), cfg.report_path)
    return 0


def _run_stats(args, cfg: GlobalConfig) -> int:
    lexicon = ReflectionLexicon.from_file(args.lexicon) if args.lexicon else cfg.lexicon()
    report = compute_stats(args.input, lexicon, delimiter=cfg.delimiter, fields=cfg.fields)
    _emit_report(report.to_dict(), cfg.report_path)
    return 0


def _run_validate_mi(args, cfg: GlobalConfig) -> int:
    report = gaussian_mi_check(m=args.m, k=args.k, rho=args.rho, seed=cfg.seed or 0)
    _emit_report(report, cfg.report_path)
    return 0 if report["passed"] else 2


_HANDLERS = {
    "condense": _run_condense,
    "perturb": _run_perturb,
    "mi": _run_mi,
    "stats": _run_stats,
    "validate-mi": _run_validate_mi,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(message)s")
    try:
        cfg = _resolve(args)
        return _HANDLERS[args.command](args, cfg)
    except DegenerateMathError as exc:
        log.error("%s", exc)
        return 2
    except (CotCondenseError, OSError, json.JSONDecodeError, ValueError) as exc:
        log.error("%s", exc)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
