"""Exception types raised across the package."""


class LowDegError(Exception):
    """Base class for all package errors."""


class DimensionError(LowDegError, ValueError):
    """Shapes or vector lengths do not agree, or vectors are dependent."""


class UnsupportedFieldError(LowDegError, ValueError):
    """Operation is only defined over a different prime field."""


class DegenerateInputError(LowDegError, ValueError):
    """Input is valid but trivial in a way the operation refuses (e.g. a constant)."""


class ResourceLimitError(LowDegError):
    """A size guard was exceeded.

    ``guard`` names the limit that tripped so that callers (the CLI) can report it.
    """

    def __init__(self, guard: str, message: str):
        super().__init__(f"{guard}: {message}")
        self.guard = guard


class InconsistentOracleError(LowDegError):
    """A black-box function behaved in a way impossible for its claimed degree."""


class ApproximationError(LowDegError):
    """Random variety approximation did not reach the target excess."""

    def __init__(self, message: str, best_excess):
        super().__init__(message)
        self.best_excess = best_excess


class RestrictionError(LowDegError):
    """Random restriction failed on every attempt."""

    def __init__(self, message: str, best: dict):
        super().__init__(message)
        self.best = best


class ParseError(LowDegError, ValueError):
    """Malformed polynomial or truth-table text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
