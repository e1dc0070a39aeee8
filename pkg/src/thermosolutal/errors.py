"""Exception types raised across the package."""

from __future__ import annotations


class InvalidFieldError(ValueError):
    """A field has the wrong shape or contains non-finite values."""


class GridMismatchError(ValueError):
    """Two objects that must share a grid do not."""


class InvalidFunctionError(ValueError):
    """An equilibrium function is not finite on the requested interval."""


class SolverFailure(RuntimeError):
    """An iterative or direct solve did not reach its tolerance."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class ConstantsInvalidError(RuntimeError):
    """Derived constants failed validation on their test family."""


class StepRejected(RuntimeError):
    """A time step violates the stability limits."""

    def __init__(self, message: str, suggested_dt: float):
        super().__init__(f"{message}; suggested dt <= {suggested_dt:.6e}")
        self.suggested_dt = suggested_dt


class BlowUpError(RuntimeError):
    """The discrete solution became non-finite."""

    def __init__(self, message: str, t_last: float):
        super().__init__(f"{message} (last valid t={t_last:.6g})")
        self.t_last = t_last


class ConfigError(ValueError):
    """A scenario or twin configuration is malformed.

    ``where`` names the offending field path (``"params.a"``) or a
    ``line N`` location for JSON syntax errors.
    """

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
