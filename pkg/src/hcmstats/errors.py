"""Exception and warning types shared across the package."""


class HcmError(Exception):
    """Base class for all package errors."""


class ConfigError(HcmError):
    """A scenario or context configuration is malformed or inconsistent."""


class NumericalValidityError(HcmError):
    """Inputs left the validity regime of the closed-form expressions.

    Raised, for example, when the derived joint-Gaussian parameters give a
    correlation coefficient with magnitude >= 1, or when a Monte-Carlo
    sampler is requested for a state whose phase-space distribution is not
    a probability density.
    """


class NonconvergenceError(HcmError):
    """A quadrature or iterative routine failed to reach its tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class RegimeWarning(UserWarning):
    """Inputs are valid but outside the regime the approximations assume."""
