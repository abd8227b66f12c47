"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class ValidationError(ValueError):
    """A state matrix fails a structural check (shape, Hermiticity, trace)."""


class NumericalError(ArithmeticError):
    """Integration produced non-finite values."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
