"""Exception hierarchy.

The CLI maps :class:`UsageError` to exit code 1 and the numeric /
consistency families to exit code 2.
"""


class ArrowheadError(Exception):
    """Base class for every error raised by this package."""


class UsageError(ArrowheadError):
    pass


class DepthLimitError(ArrowheadError):
    """Requested level exceeds the configured depth limit."""


class ValidationError(ArrowheadError, ValueError):
    """Malformed input: wrong length, non-normalized weights, ..."""


class DomainError(ArrowheadError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PreconditionError(ArrowheadError, ValueError):
    pass


class ConsistencyError(ArrowheadError):
    """An internal geometric or algebraic invariant did not hold."""


class NumericError(ArrowheadError):
    pass


class SingularExtensionError(NumericError):
    """Eigenfunction extension denominator vanishes (eigenvalue 1 or 3)."""


class FitError(NumericError):
    pass
