"""Exception taxonomy.

The CLI maps these onto exit codes, so the split matters: a DomainError is
the caller's fault (bad input, unsupported case), a PrecisionError means the
requested computation needs more digits than are available, and an
InternalError means an invariant of the library itself broke.
"""


class LfkError(Exception):
    """Base class for all library errors."""


class DomainError(LfkError):
    """Invalid or unsupported input (exit code 2)."""


class MalformedInputError(DomainError):
    """Structurally bad input: mixed moduli, shape mismatch, parse failure."""


class UnsupportedCaseError(DomainError):
    """Mathematically meaningful request the library deliberately refuses."""


class OutOfWindowError(DomainError):
    """A class or coordinate falls outside the requested working window.

    Distinct from PrecisionError: enlarging the window (not the precision)
    is the fix.
    """


class PrecisionError(LfkError):
    """A required digit is not determined at current precision (exit code 3)."""


class InternalError(LfkError):
    """An internal invariant failed; indicates a bug, not bad input (exit 4)."""
