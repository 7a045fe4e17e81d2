"""Exception types shared across the package.

The CLI maps these onto its exit-code contract: 2 usage, 3 data, 4 numeric.
"""


class ScopError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class UsageError(ScopError):
    """Bad command-line flags or configuration values."""

    exit_code = 2


class DataError(ScopError):
    """Malformed or inconsistent input data.

    Carries a stable machine-readable ``code`` (e.g. BAD_MAGIC, COUNT_MISMATCH,
    NON_FINITE, BAD_HEADER, PARSE_ERROR).
    """

    exit_code = 3

    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class ValidationError(ScopError, ValueError):
    """Precondition violation on function inputs (shape, finiteness, range)."""

    exit_code = 4


class DomainError(ScopError, ValueError):
    """Numeric or domain error: undefined coherence, degenerate parameter,
    inversion target outside a family's attainable range, and the like."""

    exit_code = 4
