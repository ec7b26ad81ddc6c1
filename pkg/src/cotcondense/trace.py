"""Core data model: chain-of-thought examples and segmented traces.

A reasoning trace is an ordered list of "thoughts", split on a delimiter
(two consecutive newlines by default, the convention used by most
reasoning-trace dumps). Traces may be wrapped in ``<think>...</think>``
markers; the wrapper is stripped before segmentation and restored on join
so that index arithmetic never counts markers as thoughts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import EmptyTraceError, TraceFormatError

DEFAULT_DELIMITER = "\n\n"

THINK_OPEN = "<think>"
THINK_CLOSE = "</think>"

_LEADING_WS = re.compile(r"\s*")


@dataclass(frozen=True)
class CoTExample:
    """One training record: question, full reasoning trace, final answer."""

    question: str
    trace: str
    answer: str
    id: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.question.strip():
            raise TraceFormatError("question is empty")
        if not self.trace.strip():
            raise TraceFormatError("trace is empty")
        open_at = self.trace.find(THINK_OPEN)
        if open_at >= 0 and self.trace.find(THINK_CLOSE, open_at) < 0:
            raise TraceFormatError(f"{THINK_OPEN} without matching {THINK_CLOSE}")


@dataclass(frozen=True)
class ThoughtTrace:
    """An ordered sequence of thought strings plus the delimiter that split them.

    ``prefix``/``suffix`` hold any think-wrapper text (marker plus adjacent
    whitespace) removed during segmentation, so ``join`` can restore it.
    """

    thoughts: tuple[str, ...]
    delimiter: str = DEFAULT_DELIMITER
    prefix: str = ""
    suffix: str = ""

    def __post_init__(self):
        if not self.delimiter:
            raise TraceFormatError("delimiter is empty")
        if not self.thoughts:
            raise EmptyTraceError("trace has no thoughts")
        for t in self.thoughts:
            if not t.strip():
                raise TraceFormatError("blank thought in trace")
            if self.delimiter in t:
                raise TraceFormatError("thought contains the delimiter")

    @property
    def n(self) -> int:
        return len(self.thoughts)


def _split_think_wrapper(text: str) -> tuple[str, str, str]:
    """Return (prefix, interior, suffix), moving wrapper whitespace out of the interior."""
    open_at = text.find(THINK_OPEN)
    if open_at < 0:
        return "", text, ""
    close_at = text.find(THINK_CLOSE, open_at + len(THINK_OPEN))
    if close_at < 0:
        raise TraceFormatError(f"{THINK_OPEN} without matching {THINK_CLOSE}")
    prefix = text[: open_at + len(THINK_OPEN)]
    interior = text[open_at + len(THINK_OPEN) : close_at]
    suffix = text[close_at:]
    lead = _LEADING_WS.match(interior).end()
    prefix += interior[:lead]
    interior = interior[lead:]
    stripped = interior.rstrip()
    suffix = interior[len(stripped) :] + suffix
    return prefix, stripped, suffix


def segment(text: str, delimiter: str = DEFAULT_DELIMITER) -> ThoughtTrace:
    """Split raw trace text into thoughts.

    Empty segments from leading/trailing/consecutive delimiters are
    dropped. A ``<think>`` wrapper, when present, is recorded on the trace
    and restored by :func:`join`.
    """
    if not delimiter:
        raise TraceFormatError("delimiter is empty")
    if not text.strip():
        raise EmptyTraceError("trace text is blank")
    prefix, interior, suffix = _split_think_wrapper(text)
    thoughts = tuple(part for part in interior.split(delimiter) if part.strip())
    if not thoughts:
        raise EmptyTraceError("trace text contains no thoughts")
    return ThoughtTrace(thoughts=thoughts, delimiter=delimiter, prefix=prefix, suffix=suffix)


def join(trace: ThoughtTrace) -> str:
    """Inverse of :func:`segment` on canonical input: delimiter-join plus wrapper."""
    return trace.prefix + trace.delimiter.join(trace.thoughts) + trace.suffix
