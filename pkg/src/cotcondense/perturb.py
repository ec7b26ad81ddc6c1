"""Structure-vs-content perturbation of reasoning traces.

Replaces the content of thoughts at selected positions with sentences
drawn from a user-supplied pool while keeping every reflection marker
verbatim, in place and in order. The trace keeps its thought count,
delimiter and wrapper, so only content changes, never structure.

Rewriter convention (fixed, since no external definition exists): a
marker occurrence keeps any punctuation characters immediately attached
after it ("Wait," stays "Wait,"), each maximal non-marker span containing
non-whitespace is replaced by one pool sentence (or several under
approximate length matching), and the surviving pieces are joined with
single spaces.
"""

from __future__ import annotations

import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .condense import as_ratio
from .dataset import FieldMap, LineFailure, read_dataset, write_dataset
from .errors import CotCondenseError, DomainError
from .lexicon import ReflectionLexicon
from .rng import SplitMix64, derive_seed
from .trace import CoTExample, DEFAULT_DELIMITER, ThoughtTrace, join, segment

REGIONS = ("head", "middle", "tail", "all")

_ATTACHED_PUNCT = ",.;:!?"

# Accepted band for --match-length approximate, as a fraction of the
# original span's character length.
_LENGTH_BAND = 0.3


@dataclass(frozen=True)
class PerturbationConfig:
    """Which region to perturb, with what, and under which seed."""

    region: str
    fraction: float
    lexicon: ReflectionLexicon
    sentence_pool: tuple[str, ...]
    seed: int
    match_length: str | None = None

    def __post_init__(self):
        if self.region not in REGIONS:
            raise DomainError(f"unknown region {self.region!r}")
        if self.region != "all":
            as_ratio(self.fraction)
        if not self.sentence_pool or any(not s.strip() for s in self.sentence_pool):
            raise DomainError("sentence pool is empty or contains blank sentences")
        if self.match_length not in (None, "approximate"):
            raise DomainError(f"unknown match-length mode {self.match_length!r}")


def load_sentence_pool(path: str | Path, lexicon: ReflectionLexicon) -> tuple[str, ...]:
    """Split a plain-text corpus into sentences and drop marker-bearing ones.

    Sentences end at terminal punctuation followed by whitespace. Sentences
    containing lexicon markers are filtered out so marker counts on
    perturbed traces stay interpretable.
    """
    text = Path(path).read_text(encoding="utf-8")
    raw = re.split(r"(?<=[.!?])\s+", text)
    pool = tuple(
        s.strip() for s in raw if s.strip() and not lexicon.matches(s)
    )
    if not pool:
        raise DomainError(f"sentence pool {path} is empty after filtering")
    return pool


def select_perturb_indices(n: int, config: PerturbationConfig) -> tuple[int, ...]:
    """1-based thought indices to perturb for a trace of ``n`` thoughts.

    The middle region is exactly the set of thoughts that edge-preserving
    condensation at ratio ``1 - fraction`` would discard.
    """
    if n < 1:
        raise DomainError(f"thought count must be >= 1, got {n}")
    if config.region == "all":
        return tuple(range(1, n + 1))
    frac = as_ratio(config.fraction)
    if config.region == "head":
        return tuple(range(1, math.floor(frac * n) + 1))
    if config.region == "tail":
        return tuple(range(n - math.floor(frac * n) + 1, n + 1))
    margin = math.floor((1 - frac) * n / 2)
    return tuple(range(margin + 1, n - margin + 1))


def _draw(rng: SplitMix64, pool: Sequence[str]) -> str:
    return pool[rng.below(len(pool))]


def _replacement(
    rng: SplitMix64,
    pool: Sequence[str],
    span_length: int,
    match_length: str | None,
) -> str:
    sentence = _draw(rng, pool)
    if match_length != "approximate":
        return sentence
    lo = (1 - _LENGTH_BAND) * span_length
    hi = (1 + _LENGTH_BAND) * span_length
    parts = [sentence]
    total = len(sentence)
    while total < lo:
        nxt = _draw(rng, pool)
        if total + 1 + len(nxt) > hi:
            break
        parts.append(nxt)
        total += 1 + len(nxt)
    return " ".join(parts)


def perturb_thought(
    thought: str,
    lexicon: ReflectionLexicon,
    sentence_pool: Sequence[str],
    rng: SplitMix64,
    match_length: str | None = None,
) -> str:
    """Replace non-marker content of one thought with pool sentences.

    Markers survive verbatim with attached punctuation; a thought with no
    marker becomes a single drawn sentence.
    """
    pieces = []
    cursor = 0
    for start, end in lexicon.finditer(thought):
        while end < len(thought) and thought[end] in _ATTACHED_PUNCT:
            end += 1
        span = thought[cursor:start]
        if span.strip():
            pieces.append(_replacement(rng, sentence_pool, len(span), match_length))
        pieces.append(thought[start:end])
        cursor = end
    tail = thought[cursor:]
    if tail.strip():
        pieces.append(_replacement(rng, sentence_pool, len(tail), match_length))
    if not pieces:
        pieces.append(_draw(rng, sentence_pool))
    return " ".join(pieces)


@dataclass
class PerturbationReport:
    """Aggregate accounting for one dataset perturbation run."""

    region: str
    fraction: float
    seed: int
    example_count: int = 0
    perturbed_thoughts: int = 0
    preserved_markers: int = 0
    failures: list[LineFailure] = field(default_factory=list)
    wall_time_seconds: float = 0.0

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "report": "perturb",
            "region": self.region,
            "fraction": self.fraction,
            "seed": self.seed,
            "example_count": self.example_count,
            "perturbed_thoughts": self.perturbed_thoughts,
            "preserved_markers": self.preserved_markers,
            "failure_count": len(self.failures),
            "failures": [f.to_dict() for f in self.failures],
            "wall_time_seconds": self.wall_time_seconds,
        }


def _perturb_one(index: int, example: CoTExample, config: PerturbationConfig, delimiter: str):
    """Returns (index, example_or_None, perturbed_count, marker_count, error)."""
    try:
        trace = segment(example.trace, delimiter)
        selected = select_perturb_indices(trace.n, config)
        rng = SplitMix64(derive_seed(config.seed, index))
        thoughts = list(trace.thoughts)
        markers = 0
        for i in selected:
            markers += config.lexicon.count(thoughts[i - 1])
            thoughts[i - 1] = perturb_thought(
                thoughts[i - 1],
                config.lexicon,
                config.sentence_pool,
                rng,
                config.match_length,
            )
        rebuilt = ThoughtTrace(
            thoughts=tuple(thoughts),
            delimiter=trace.delimiter,
            prefix=trace.prefix,
            suffix=trace.suffix,
        )
        out = CoTExample(
            question=example.question,
            trace=join(rebuilt),
            answer=example.answer,
            id=example.id,
            extra=example.extra,
        )
        return index, out, len(selected), markers, None
    except CotCondenseError as exc:
        return index, None, 0, 0, exc


def perturb_dataset(
    input_path: str | Path,
    output_path: str | Path,
    config: PerturbationConfig,
    delimiter: str = DEFAULT_DELIMITER,
    fields: FieldMap | None = None,
    on_error: str = "skip",
    threads: int = 1,
) -> PerturbationReport:
    """Perturb the selected region of every trace in a JSONL dataset.

    Thought counts are preserved per example; thoughts outside the
    selected region are byte-identical to the input. Output is a pure
    function of (input bytes, config, seed): each example's stream is
    derived from (seed, example index), so thread scheduling cannot
    change results.
    """
    fields = fields or FieldMap()
    started = time.perf_counter()
    report = PerturbationReport(
        region=config.region, fraction=float(config.fraction), seed=config.seed
    )
    examples = read_dataset(input_path, fields, on_error=on_error, failures=report.failures)

    def worker(item):
        index, example = item
        return _perturb_one(index, example, config, delimiter)

    if threads > 1:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(worker, enumerate(examples))
    else:
        pool = None
        results = map(worker, enumerate(examples))

    def successful():
        for index, out, perturbed, markers, error in results:
            if error is not None:
                if on_error == "fail":
                    raise error
                report.failures.append(LineFailure(index + 1, f"example {index}: {error}"))
                continue
            report.perturbed_thoughts += perturbed
            report.preserved_markers += markers
            yield out

    try:
        report.example_count = write_dataset(output_path, successful(), fields)
    finally:
        if pool is not None:
            pool.shutdown()
    report.wall_time_seconds = time.perf_counter() - started
    return report
