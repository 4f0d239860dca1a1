class SplecticError(ValueError):
    """Base class for all library errors."""


class DimensionError(SplecticError):
    pass


class NotSymmetricError(SplecticError):
    pass


class NotAnSSpaceError(SplecticError):
    """The form cannot carry an s-space structure (wrong signature or degenerate)."""


class DegenerateFormError(NotAnSSpaceError):
    pass


class NoRationalNullVectorError(NotAnSSpaceError):
    """No rational null vector was found, so no rational admissible basis could be built."""


class SingularMatrixError(SplecticError):
    pass


class ToleranceExceeded(SplecticError):
    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NotClosedError(SplecticError):
    """A bracket of basis elements leaves the span of the basis."""

    def __init__(self, message, residual=None, pair=None):
        super().__init__(message)
        self.residual = residual
        self.pair = pair
