"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the admissible set of an operation."""


class EvaluationError(ArithmeticError):
    """A non-finite value was produced while evaluating an integrand."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class UsageError(ValueError):
    """Invalid combination of options (e.g. an excluded limit case)."""


class UnsupportedFunctionError(TypeError):
    """The test function has no closed form for the requested operation."""
