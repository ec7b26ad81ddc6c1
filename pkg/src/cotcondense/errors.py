"""Exception types shared across the package.

The CLI maps these onto exit codes: DegenerateMathError exits with 2,
every other CotCondenseError with 1.
"""


class CotCondenseError(Exception):
    """Base class for all errors raised by this package."""


class TraceFormatError(CotCondenseError, ValueError):
    """A trace or example violates a structural constraint."""


class EmptyTraceError(TraceFormatError):
    """Segmentation produced no thoughts (blank or delimiter-only input)."""


class MalformedLineError(CotCondenseError, ValueError):
    """A dataset line could not be parsed."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class MissingFieldError(MalformedLineError):
    """A dataset line parsed but lacks a required field."""


class DomainError(CotCondenseError, ValueError):
    """A numeric argument is outside its valid range."""


class EmptyPlanError(DomainError):
    """A condensation formula yielded an empty index set and min-keep is off."""


class PlanMismatchError(CotCondenseError, ValueError):
    """A condensation plan was built for a different thought count."""


class DimensionMismatchError(CotCondenseError, ValueError):
    """Paired embedding matrices disagree on sample count or width."""


class DegenerateMathError(CotCondenseError, ArithmeticError):
    """A computation hit a degenerate configuration (e.g. duplicate points)."""


class EmbFileError(CotCondenseError, ValueError):
    """An embedding matrix file is corrupt or has an unsupported header."""
