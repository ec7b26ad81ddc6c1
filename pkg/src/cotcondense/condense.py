"""Thought-level trace condensation.

A condensation plan keeps a subset of the 1-based thought indices
``{1..n}`` and drops the rest. Strategies:

* ``epic``   edge-preserving: keep the first and last ``floor(tau*n/2)``
  thoughts, drop the middle.
* ``hoc``    head-only: keep the first ``floor(tau*n)``.
* ``toc``    tail-only: keep the last ``floor(tau*n)``.
* ``moc``    middle-only: keep the centered block left over after removing
  ``floor((1-tau)*n/2)`` thoughts from each end.
* ``random`` keep ``max(1, floor(tau*n))`` indices sampled uniformly
  without replacement (seeded, order-preserving).

Two documented deviations from the raw formulas, both flagged on the plan:
``tau == 1`` always returns the identity set, and when a positional
formula comes out empty the min-keep fallback retains boundary thoughts
({1, n} for epic, {1} for hoc, {n} for toc) instead of emitting an empty
trace.

Ratios are interpreted exactly as the decimal written: ``0.99`` means
99/100, and all floors are evaluated in exact rational arithmetic, so
plans are reproducible bit-for-bit across platforms.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

from .dataset import FieldMap, LineFailure, read_dataset, write_dataset
from .errors import (
    CotCondenseError,
    DomainError,
    EmptyPlanError,
    PlanMismatchError,
)
from .rng import derive_seed, sample_indices
from .trace import CoTExample, DEFAULT_DELIMITER, ThoughtTrace, join, segment

STRATEGIES = ("epic", "hoc", "toc", "moc", "random")

RatioLike = Union[float, int, str, Fraction]


def as_ratio(tau: RatioLike) -> Fraction:
    """Canonicalize a condensation ratio to an exact fraction.

    Floats go through their shortest decimal representation so that a
    ratio written as 0.99 means exactly 99/100 rather than the nearest
    binary double.
    """
    try:
        if isinstance(tau, Fraction):
            frac = tau
        elif isinstance(tau, float):
            frac = Fraction(str(tau))
        else:
            frac = Fraction(tau)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise DomainError(f"ratio is not a number: {tau!r}") from exc
    if not 0 < frac <= 1:
        raise DomainError(f"ratio must be in (0, 1], got {tau!r}")
    return frac


@dataclass(frozen=True)
class CondensationPlan:
    """A strategy, ratio and the resulting ascending 1-based index set."""

    strategy: str
    tau: float
    n: int
    omega: tuple[int, ...]
    seed: int | None = None
    fallback: bool = False
    nominal_retained: int = 0

    @property
    def retained(self) -> int:
        return len(self.omega)

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "tau": self.tau,
            "n": self.n,
            "omega": list(self.omega),
            "seed": self.seed,
            "fallback": self.fallback,
            "retained": self.retained,
            "nominal_retained": self.nominal_retained,
        }


def plan_indices(
    n: int,
    tau: RatioLike,
    strategy: str,
    seed: int | None = None,
    min_keep: bool = True,
) -> CondensationPlan:
    """Compute the retained index set for one trace.

    ``seed`` is required for (and only for) the random strategy. With
    ``min_keep`` off, a positional formula that comes out empty raises
    EmptyPlanError instead of falling back.
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    if n < 1:
        raise DomainError(f"thought count must be >= 1, got {n}")
    frac = as_ratio(tau)
    if strategy == "random":
        if seed is None:
            raise DomainError("random strategy requires a seed")
    elif seed is not None:
        raise DomainError(f"seed is only valid for the random strategy, not {strategy!r}")

    nominal = math.floor(frac * n)
    tau_f = float(frac)

    def plan(omega: tuple[int, ...], fallback: bool = False) -> CondensationPlan:
        return CondensationPlan(
            strategy=strategy,
            tau=tau_f,
            n=n,
            omega=omega,
            seed=seed,
            fallback=fallback,
            nominal_retained=nominal,
        )

    if frac == 1:
        # Identity special case: the raw edge-keeping formula would drop a
        # middle thought for odd n, but a ratio of 1 means the full trace.
        return plan(tuple(range(1, n + 1)))

    if strategy == "epic":
        half = math.floor(frac * n / 2)
        if half >= 1:
            head = range(1, half + 1)
            tail = range(n - half + 1, n + 1)
            return plan(tuple(head) + tuple(tail))
        if not min_keep:
            raise EmptyPlanError(f"epic with tau={tau_f}, n={n} keeps nothing")
        return plan((1,) if n == 1 else (1, n), fallback=True)

    if strategy == "hoc":
        if nominal >= 1:
            return plan(tuple(range(1, nominal + 1)))
        if not min_keep:
            raise EmptyPlanError(f"hoc with tau={tau_f}, n={n} keeps nothing")
        return plan((1,), fallback=True)

    if strategy == "toc":
        if nominal >= 1:
            return plan(tuple(range(n - nominal + 1, n + 1)))
        if not min_keep:
            raise EmptyPlanError(f"toc with tau={tau_f}, n={n} keeps nothing")
        return plan((n,), fallback=True)

    if strategy == "moc":
        margin = math.floor((1 - frac) * n / 2)
        lo, hi = margin + 1, n - margin
        if lo <= hi:
            return plan(tuple(range(lo, hi + 1)))
        # Unreachable for tau in (0, 1) since 2*margin < n, kept defensive.
        return plan((math.ceil(n / 2),), fallback=True)

    size = max(1, nominal)
    return plan(sample_indices(n, size, seed))


def apply(trace: ThoughtTrace, plan: CondensationPlan) -> ThoughtTrace:
    """Keep the planned thoughts, preserving order, delimiter and wrapper."""
    if plan.n != trace.n:
        raise PlanMismatchError(f"plan built for n={plan.n}, trace has n={trace.n}")
    kept = tuple(trace.thoughts[i - 1] for i in plan.omega)
    return ThoughtTrace(
        thoughts=kept,
        delimiter=trace.delimiter,
        prefix=trace.prefix,
        suffix=trace.suffix,
    )


@dataclass
class CondensationReport:
    """Aggregate accounting for one dataset condensation run."""

    strategy: str
    tau: float
    example_count: int = 0
    thoughts_before: int = 0
    thoughts_after: int = 0
    fallback_count: int = 0
    thought_count_histogram: dict[int, int] = field(default_factory=dict)
    failures: list[LineFailure] = field(default_factory=list)
    wall_time_seconds: float = 0.0

    @property
    def retention(self) -> float:
        if self.thoughts_before == 0:
            return 0.0
        return self.thoughts_after / self.thoughts_before

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "report": "condense",
            "strategy": self.strategy,
            "tau": self.tau,
            "example_count": self.example_count,
            "thoughts_before": self.thoughts_before,
            "thoughts_after": self.thoughts_after,
            "retention": self.retention,
            "fallback_count": self.fallback_count,
            "thought_count_histogram": {str(k): v for k, v in sorted(self.thought_count_histogram.items())},
            "failure_count": len(self.failures),
            "failures": [f.to_dict() for f in self.failures],
            "wall_time_seconds": self.wall_time_seconds,
        }


def _condense_one(
    index: int,
    example: CoTExample,
    strategy: str,
    frac: Fraction,
    delimiter: str,
    seed: int | None,
    min_keep: bool,
):
    """Returns (index, example_or_None, n_before, n_after, fallback, error)."""
    try:
        trace = segment(example.trace, delimiter)
        plan_seed = derive_seed(seed, index) if strategy == "random" else None
        plan = plan_indices(trace.n, frac, strategy, seed=plan_seed, min_keep=min_keep)
        condensed = apply(trace, plan)
        out = CoTExample(
            question=example.question,
            trace=join(condensed),
            answer=example.answer,
            id=example.id,
            extra=example.extra,
        )
        return index, out, trace.n, condensed.n, plan.fallback, None
    except CotCondenseError as exc:
        return index, None, 0, 0, False, exc


def condense_dataset(
    input_path: str | Path,
    output_path: str | Path,
    strategy: str,
    tau: RatioLike,
    delimiter: str = DEFAULT_DELIMITER,
    seed: int | None = None,
    min_keep: bool = True,
    fields: FieldMap | None = None,
    on_error: str = "skip",
    threads: int = 1,
) -> CondensationReport:
    """Condense every trace in a JSONL dataset.

    Questions and answers pass through unchanged. Output order equals
    input order regardless of ``threads``; per-example randomness is
    derived from (seed, example index) so scheduling cannot change
    results. Failed examples are skipped and reported unless
    ``on_error="fail"``.
    """
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    if strategy == "random" and seed is None:
        raise DomainError("random strategy requires a seed")
    frac = as_ratio(tau)
    fields = fields or FieldMap()
    started = time.perf_counter()
    report = CondensationReport(strategy=strategy, tau=float(frac))

    examples = read_dataset(input_path, fields, on_error=on_error, failures=report.failures)

    def worker(item):
        index, example = item
        return _condense_one(index, example, strategy, frac, delimiter, seed, min_keep)

    if threads > 1:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(worker, enumerate(examples))
    else:
        pool = None
        results = map(worker, enumerate(examples))

    def successful():
        for index, out, n_before, n_after, fallback, error in results:
            if error is not None:
                if on_error == "fail":
                    raise error
                report.failures.append(LineFailure(index + 1, f"example {index}: {error}"))
                continue
            report.thoughts_before += n_before
            report.thoughts_after += n_after
            report.fallback_count += int(fallback)
            report.thought_count_histogram[n_before] = (
                report.thought_count_histogram.get(n_before, 0) + 1
            )
            yield out

    try:
        report.example_count = write_dataset(output_path, successful(), fields)
    finally:
        if pool is not None:
            pool.shutdown()
    report.wall_time_seconds = time.perf_counter() - started
    return report
