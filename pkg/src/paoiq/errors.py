"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 1, numeric
failures exit 2, I/O errors exit 3.
"""


class PaoiqError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(PaoiqError, ValueError):
    """Invalid parameter, input, or configuration."""


class StabilityError(ValidationError):
    """A bound was requested for an unstable system (load at or above 1)."""


class NumericError(PaoiqError, ArithmeticError):
    """A computation could not produce a usable result."""


class CalibrationRangeError(NumericError):
    """The variability mapping was evaluated outside its fitted region."""


class NoSolutionError(NumericError):
    """A root-finding target is unreachable."""


class SingularDesignError(NumericError):
    """A regression design matrix is rank deficient."""
