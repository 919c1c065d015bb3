"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Structurally invalid input (bad Dyck word, wrong block size, ...)."""


class BudgetExceeded(RuntimeError):
    """An exhaustive search ran past its configured step budget."""


class CacheFormatError(ValueError):
    """A tree cache or b-file could not be parsed."""

    def __init__(self, path, lineno, message):
        self.path = path
        self.lineno = lineno
        super().__init__(f"{path}:{lineno}: {message}")


class ConsistencyError(RuntimeError):
    """An internal invariant failed; this always indicates a bug."""


class PrecisionError(ArithmeticError):
    """Working precision is too low for the requested computation."""
