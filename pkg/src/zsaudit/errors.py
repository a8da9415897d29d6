"""Exception hierarchy shared by all pipelines."""

from __future__ import annotations


class ZSError(Exception):
    """Base class for computational failures (CLI exit status 1)."""


class IntegrationError(ZSError):
    def __init__(self, message: str, t_reached: float):
        super().__init__(f"{message} (reached t={t_reached:.17g})")
        self.t_reached = t_reached


class LabelingError(ZSError):
    """Band edges could not be bracketed or labeled consistently."""


class InconsistencyError(ZSError):
    """A computed value contradicts a structural fact (e.g. |Delta| < 1 in a gap)."""


class QuadratureError(ZSError):
    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (error estimate {estimate:.3e})")
        self.estimate = estimate


class ConvergenceError(ZSError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class InputError(ValueError):
    """Malformed or incomparable input data."""


class ConfigError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
