"""Dataset-level descriptive statistics."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from pathlib import Path

from .dataset import FieldMap, LineFailure, read_dataset
from .errors import CotCondenseError
from .lexicon import ReflectionLexicon
from .trace import DEFAULT_DELIMITER, segment


def _describe(values: list) -> dict:
    if not values:
        return {"min": None, "median": None, "mean": None, "max": None}
    return {
        "min": min(values),
        "median": statistics.median(values),
        "mean": statistics.fmean(values),
        "max": max(values),
    }


@dataclass
class StatsReport:
    example_count: int = 0
    thought_counts: dict = field(default_factory=dict)
    token_lengths: dict = field(default_factory=dict)
    char_lengths: dict = field(default_factory=dict)
    reflection_counts: dict = field(default_factory=dict)
    marker_frequencies: dict = field(default_factory=dict)
    failures: list[LineFailure] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "report": "stats",
            "example_count": self.example_count,
            "thought_counts": self.thought_counts,
            "token_lengths": self.token_lengths,
            "char_lengths": self.char_lengths,
            "reflection_counts": self.reflection_counts,
            "marker_frequencies": self.marker_frequencies,
            "failure_count": len(self.failures),
            "failures": [f.to_dict() for f in self.failures],
        }


def compute_stats(
    input_path: str | Path,
    lexicon: ReflectionLexicon | None = None,
    delimiter: str = DEFAULT_DELIMITER,
    fields: FieldMap | None = None,
) -> StatsReport:
    """Aggregate thought-count, length and reflection-token distributions.

    Token lengths are whitespace-word counts, deliberately decoupled from
    any model vocabulary.
    """
    lexicon = lexicon or ReflectionLexicon.default()
    report = StatsReport()
    thought_counts = []
    token_lengths = []
    char_lengths = []
    reflection_counts = []
    marker_totals: dict[str, int] = {}
    for index, example in enumerate(
        read_dataset(input_path, fields, on_error="skip", failures=report.failures)
    ):
        try:
            trace = segment(example.trace, delimiter)
        except CotCondenseError as exc:
            report.failures.append(LineFailure(index + 1, f"example {index}: {exc}"))
            continue
        report.example_count += 1
        thought_counts.append(trace.n)
        token_lengths.append(len(example.trace.split()))
        char_lengths.append(len(example.trace))
        reflection_counts.append(lexicon.count(example.trace))
        for marker, count in lexicon.count_by_marker(example.trace).items():
            if count:
                marker_totals[marker] = marker_totals.get(marker, 0) + count
    report.thought_counts = _describe(thought_counts)
    report.token_lengths = _describe(token_lengths)
    report.char_lengths = _describe(char_lengths)
    report.reflection_counts = _describe(reflection_counts)
    report.marker_frequencies = dict(sorted(marker_totals.items()))
    return report
