"""Exception types shared across the package.

The CLI maps ConfigurationError (and subclasses) to exit code 2 and
NumericalFailure to exit code 3.
"""


class ConfigurationError(ValueError):
    """Invalid parameter, grid, band, or config input; rejected before compute."""


class AdmissibilityError(ConfigurationError):
    """Regularity s at or below the admissible threshold for the given power p."""


class BandError(ConfigurationError):
    """Dyadic frequency outside the grid's resolvable band."""


class GuardError(ConfigurationError):
    """Domain-of-dependence guard rejected the run before stepping."""


class InputError(ValueError):
    """Non-finite or degenerate numerical input to an operation."""


class NumericalFailure(RuntimeError):
    """NaN/overflow or boundary contamination detected during time stepping."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t
