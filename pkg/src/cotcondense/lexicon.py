"""Reflection-token lexicon and counting.

Reflection tokens are discourse markers ("wait", "hmm", ...) that signal
self-checking or backtracking inside a reasoning trace. Matching is
case-insensitive at word boundaries, so punctuation next to a marker
("Wait,") never blocks a match while "waiter" never produces one.
Multi-word cues are stored as ordered token sequences and may be separated
by any run of whitespace in the text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DomainError

# Markers commonly used in reasoning-trace studies. "wait" and "hmm" are
# the canonical pair; the rest are frequent transition cues. Override with
# a lexicon file (one marker per line, '#' comments) to match any study.
DEFAULT_MARKERS = (
    "wait",
    "hmm",
    "alternatively",
    "but",
    "however",
    "therefore",
    "let me check",
    "actually",
    "on second thought",
)


def _compile(tokens: tuple[str, ...]) -> re.Pattern:
    body = r"\s+".join(re.escape(tok) for tok in tokens)
    return re.compile(rf"\b{body}\b", re.IGNORECASE)


@dataclass(frozen=True)
class ReflectionLexicon:
    """A set of reflection markers with word-boundary matching."""

    markers: tuple[tuple[str, ...], ...]
    _patterns: tuple[re.Pattern, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.markers:
            raise DomainError("lexicon is empty")
        for tokens in self.markers:
            if not tokens or any(not tok or any(c.isspace() for c in tok) for tok in tokens):
                raise DomainError(f"invalid marker tokens: {tokens!r}")
        object.__setattr__(self, "_patterns", tuple(_compile(t) for t in self.markers))

    @classmethod
    def from_markers(cls, markers: Iterable[str]) -> "ReflectionLexicon":
        """Build from marker strings; whitespace inside a string makes a token sequence."""
        parsed = tuple(tuple(m.lower().split()) for m in markers if m.strip())
        return cls(markers=parsed)

    @classmethod
    def default(cls) -> "ReflectionLexicon":
        return cls.from_markers(DEFAULT_MARKERS)

    @classmethod
    def from_file(cls, path: str | Path) -> "ReflectionLexicon":
        """Load a plain-text lexicon: one marker per line, '#' starts a comment."""
        lines = []
        for raw in Path(path).read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
        if not lines:
            raise DomainError(f"lexicon file {path} has no markers")
        return cls.from_markers(lines)

    def count(self, text: str) -> int:
        """Total marker occurrences in ``text``.

        Each marker is counted independently (non-overlapping within one
        marker), so overlapping matches of distinct markers all count.
        """
        return sum(len(pat.findall(text)) for pat in self._patterns)

    def count_by_marker(self, text: str) -> dict[str, int]:
        """Occurrence count per marker, keyed by the marker's space-joined form."""
        return {
            " ".join(tokens): len(pat.findall(text))
            for tokens, pat in zip(self.markers, self._patterns)
        }

    def finditer(self, text: str) -> Iterator[tuple[int, int]]:
        """Yield non-overlapping (start, end) marker spans, leftmost-longest.

        Used by the perturbation rewriter, which needs a partition of the
        text rather than per-marker counts.
        """
        spans = []
        for pat in self._patterns:
            spans.extend(m.span() for m in pat.finditer(text))
        spans.sort(key=lambda s: (s[0], -(s[1] - s[0])))
        cursor = 0
        for start, end in spans:
            if start >= cursor:
                yield start, end
                cursor = end

    def matches(self, text: str) -> bool:
        return any(pat.search(text) for pat in self._patterns)


def count_reflection_tokens(text: str, lexicon: ReflectionLexicon) -> int:
    """Number of word-boundary, case-insensitive marker occurrences in ``text``."""
    return lexicon.count(text)
