"""Line-delimited JSON dataset I/O.

One JSON object per line, UTF-8. Field names vary across public CoT dumps,
so the mapping is configurable; defaults follow the problem/generation/
answer convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import MalformedLineError, MissingFieldError, TraceFormatError
from .trace import CoTExample


@dataclass(frozen=True)
class FieldMap:
    """Maps record keys onto question / trace / answer / id."""

    question: str = "problem"
    trace: str = "generation"
    answer: str = "answer"
    id: str = "id"

    def mapped_names(self) -> set[str]:
        return {self.question, self.trace, self.answer, self.id}


@dataclass
class LineFailure:
    line_no: int
    reason: str

    def to_dict(self) -> dict:
        return {"line": self.line_no, "reason": self.reason}


def _parse_line(line: str, line_no: int, fields: FieldMap) -> CoTExample:
    try:
        record = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedLineError(line_no, f"invalid JSON: {exc.msg}") from exc
    if not isinstance(record, dict):
        raise MalformedLineError(line_no, "record is not an object")
    values = {}
    for attr in ("question", "trace", "answer"):
        key = getattr(fields, attr)
        if key not in record:
            raise MissingFieldError(line_no, f"missing field {key!r}")
        value = record[key]
        if not isinstance(value, str):
            raise MalformedLineError(line_no, f"field {key!r} is not a string")
        values[attr] = value
    raw_id = record.get(fields.id)
    extra = {k: v for k, v in record.items() if k not in fields.mapped_names()}
    try:
        return CoTExample(
            question=values["question"],
            trace=values["trace"],
            answer=values["answer"],
            id=None if raw_id is None else str(raw_id),
            extra=extra,
        )
    except TraceFormatError as exc:
        raise MalformedLineError(line_no, str(exc)) from exc


def read_dataset(
    path: str | Path,
    fields: FieldMap | None = None,
    on_error: str = "skip",
    failures: list[LineFailure] | None = None,
) -> Iterator[CoTExample]:
    """Yield examples from a JSONL file in file order.

    ``on_error="skip"`` records parse failures (appended to ``failures``
    when given) and keeps going; ``on_error="fail"`` raises on the first
    bad line. Blank lines are ignored.
    """
    if on_error not in ("skip", "fail"):
        raise ValueError(f"on_error must be 'skip' or 'fail', got {on_error!r}")
    fields = fields or FieldMap()
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                yield _parse_line(line, line_no, fields)
            except MalformedLineError as exc:
                if on_error == "fail":
                    raise
                if failures is not None:
                    failures.append(LineFailure(exc.line_no, exc.reason))


def example_to_record(example: CoTExample, fields: FieldMap) -> dict:
    record = {
        fields.question: example.question,
        fields.trace: example.trace,
        fields.answer: example.answer,
    }
    if example.id is not None:
        record[fields.id] = example.id
    for key, value in example.extra.items():
        record.setdefault(key, value)
    return record


def write_dataset(
    path: str | Path,
    examples: Iterable[CoTExample],
    fields: FieldMap | None = None,
) -> int:
    """Write one JSON record per line; returns the number written."""
    fields = fields or FieldMap()
    count = 0
    with open(path, "w", encoding="utf-8") as handle:
        for example in examples:
            handle.write(json.dumps(example_to_record(example, fields), ensure_ascii=False))
            handle.write("\n")
            count += 1
    return count
