"""Exception types shared across the toolkit."""


class QDecayError(Exception):
    """Base class for all toolkit errors."""


class OrderLimitError(QDecayError, ValueError):
    """Polynomial or factorial order above the configured cap."""


class TruncationError(QDecayError, RuntimeError):
    """A truncated series or distribution failed its tail check.

    Carries ``suggested`` with a size that should pass.
    """

    def __init__(self, message, suggested=None):
        super().__init__(message)
        self.suggested = suggested


class TailBudgetError(QDecayError, RuntimeError):
    """Fock-space population leaked past the truncation guard band."""

    def __init__(self, message, suggested_dim=None, at_time=None):
        super().__init__(message)
        self.suggested_dim = suggested_dim
        self.at_time = at_time


class UnsupportedRegimeError(QDecayError, ValueError):
    """Parameters outside the regime a closed form is valid for."""


class NumericalConsistencyError(QDecayError, RuntimeError):
    """An internally computed quantity violated a physical bound."""


class ConfigError(QDecayError, ValueError):
    """Malformed run configuration."""
