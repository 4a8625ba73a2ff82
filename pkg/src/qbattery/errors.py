"""Exception hierarchy shared across the package."""


class QBatteryError(Exception):
    """Base class for all errors raised by qbattery."""


class DegeneratePoleError(QBatteryError, ZeroDivisionError):
    """The Green function denominator vanished exactly (a bound state was hit)."""


class BoundStateError(QBatteryError):
    """Spectral weight leaks out of the lead bands into a bound state.

    Attributes
    ----------
    deficit : float
        ``1 - integral of A_QB`` over the band support.
    poles : tuple of float
        Real roots of ``w - eps_qb - Re Sigma_tot(w)`` where the broadening vanishes.
    """

    def __init__(self, message, deficit=float("nan"), poles=()):
        super().__init__(message)
        self.deficit = deficit
        self.poles = tuple(poles)


class OutOfSupportError(QBatteryError, ValueError):
    """The NE distribution was requested where both leads have zero broadening."""


class NonConvergenceError(QBatteryError, ArithmeticError):
    """Adaptive quadrature ran out of subdivisions.

    The best available estimate is kept on the exception so callers can
    still report it.
    """

    def __init__(self, message, value=float("nan"), error_estimate=float("inf"), subdivisions_used=0):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.subdivisions_used = subdivisions_used


class DomainError(QBatteryError, ValueError):
    """Argument outside the mathematical domain of a function."""


class ConfigError(QBatteryError, ValueError):
    """Malformed or out-of-range run configuration."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
