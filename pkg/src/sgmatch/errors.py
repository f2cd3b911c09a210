"""Exception types shared across the package.

Each maps to a fixed CLI exit code: ParameterError -> 2, FormatError -> 3,
ResourceLimitError -> 4.
"""


class ParameterError(ValueError):
    """An argument violates a documented precondition or domain restriction."""


class FormatError(ValueError):
    """An input file is malformed or violates its schema."""


class ResourceLimitError(RuntimeError):
    """A request exceeds a hard size cap (e.g. factorial enumeration limits)."""
