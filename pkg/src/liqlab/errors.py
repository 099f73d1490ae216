"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class BracketError(RuntimeError):
    """No sign change / interior optimum could be bracketed."""


class StageOrderError(RuntimeError):
    """A cycle stage was invoked out of order."""


class RatioMismatchError(ValueError):
    """Deposit or withdrawal amounts do not match the pool ratio."""


class ConfigError(ValueError):
    """Invalid experiment configuration (syntax, key, or value)."""
