"""Exception hierarchy shared by all modules."""


class QuivmodError(Exception):
    """Base class for every error raised by quivmod."""


class FieldMismatchError(QuivmodError, TypeError):
    """Operands live over different fields."""


class ShapeError(QuivmodError, ValueError):
    """Matrix or vector dimensions are incompatible."""


class MixedDenominatorError(QuivmodError, ValueError):
    """Two rational expressions track different denominators."""


class LiftError(QuivmodError, ValueError):
    """The clearing power is below the bound required by the lift."""


class CapExceededError(QuivmodError, RuntimeError):
    """A search or enumeration would exceed its configured cap."""


class InconclusiveError(QuivmodError, RuntimeError):
    """A randomized procedure could not reach a decision."""


class PreconditionError(QuivmodError, ValueError):
    """An input violates the mathematical hypotheses of an operation."""
