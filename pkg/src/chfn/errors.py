"""Exception hierarchy shared by all modules."""


class ChfnError(Exception):
    """Base class for all library errors."""


class DomainError(ChfnError, ValueError):
    """An argument lies outside the domain of an operation."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class ParameterError(ChfnError, ValueError):
    """A constructor parameter violates its documented range."""


class AdmissibilityError(ParameterError):
    """A drift parameter violates the principal-branch bound."""

    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


class EvaluationError(ChfnError, ArithmeticError):
    """Evaluation hit a pole or a zero that the operation cannot pass."""


class RangeError(ChfnError, ValueError):
    """A tabulated function was evaluated outside its grid."""


class StructureError(ChfnError):
    """A function does not have the structural form an operation requires."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PreconditionError(ChfnError):
    """Inputs do not satisfy an operation's precondition."""


class MultiplicityError(ChfnError):
    """Repeated roots where only simple ones are supported."""


class ConjugatePairError(ChfnError):
    """Complex roots where real ones are required for a Laplace mixture."""


class InvalidPGFError(ChfnError):
    """A pole lies inside or on the closed unit disc."""


class SamplerRefusalError(ChfnError):
    """Refusing to sample a law whose density is not certified nonnegative."""


class EnvelopeError(ChfnError):
    """Rejection sampling acceptance rate is too low to be useful."""
