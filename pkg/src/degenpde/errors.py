"""Exception types shared across the package."""


class DegenPdeError(Exception):
    """Base class for all package errors."""


class InvalidParamsError(DegenPdeError, ValueError):
    """Raised when a parameter set violates its admissibility constraints."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UndefinedConstantError(DegenPdeError, ValueError):
    """A derived constant is undefined for these parameters.

    Typical causes: a power of a negative base with non-integer exponent,
    or a branch whose closed form degenerates (division by zero).
    """

    def __init__(self, symbol, reason):
        self.symbol = symbol
        self.reason = reason
        super().__init__(f"constant '{symbol}' undefined: {reason}")


class DomainError(DegenPdeError, ValueError):
    """An evaluation was requested outside the admissible domain."""


class RegimeMismatchError(DegenPdeError, ValueError):
    """An operation was applied in a diffusion regime it does not cover."""


class RootFindingError(DegenPdeError, RuntimeError):
    """Bracketing or bisection failed to locate a root."""


class SolverError(DegenPdeError, RuntimeError):
    """A finite-difference solve failed (zero pivot, non-finite entries)."""


class ConfigError(DegenPdeError, ValueError):
    """A run configuration file could not be parsed or is inconsistent."""
