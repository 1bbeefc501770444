"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the restricted domain of a function."""


class UnsupportedParameterError(ValueError):
    """A shape parameter is outside the range an operation supports."""


class OverflowGuardError(OverflowError):
    """A combinatorial argument exceeds the configured cap."""


class ConfigurationError(ValueError):
    """Inconsistent problem setup (empty class, dimension mismatch, ...)."""


class DataError(ValueError):
    """A dataset file could not be parsed.

    ``path`` and ``line`` locate the offending input when known.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
        if line is not None:
            where = f"{where}:{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class NumericFailure(ArithmeticError):
    """The optimizer met a non-finite value or gradient.

    The partial iteration trace is attached as ``trace``.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class DegenerateHyperplaneError(ValueError):
    """Diagnostics requested for a hyperplane with ``w == 0``."""
