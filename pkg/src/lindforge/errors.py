"""Exception types shared across the package.

The CLI maps these onto exit codes: ValidationError -> 2, the numerical
errors (BranchCutError, SingularChannelError, ConvergenceError) -> 3.
"""


class ValidationError(ValueError):
    """Invalid model, config, or argument (dimension mismatch, PSD violation, ...)."""


class BranchCutError(ArithmeticError):
    """Matrix logarithm requested for a spectrum touching the negative real axis."""


class SingularChannelError(ArithmeticError):
    """Matrix logarithm requested for a (numerically) singular channel."""


class ConvergenceError(ArithmeticError):
    """Grid refinement did not converge to the requested tolerance."""
