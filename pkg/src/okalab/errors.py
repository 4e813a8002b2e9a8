"""Exception hierarchy.

Precondition failures derive from ``PreconditionError`` (a ``ValueError``);
numerical rejections derive from ``NumericalRejection`` (an
``ArithmeticError``).  The CLI maps them to exit codes 2 and 3.
"""


class OkalabError(Exception):
    pass


class PreconditionError(OkalabError, ValueError):
    pass


class NumericalRejection(OkalabError, ArithmeticError):
    pass


class DomainError(PreconditionError):
    """Input outside the domain of the operation (e.g. log of zero)."""


class BoundaryProximityError(PreconditionError):
    """A contour passes too close to a zero of the function being counted."""


class DivisorMeetsTorusError(PreconditionError):
    """The function vanishes (to certified precision) on the sampled cycle."""


class ContinuationError(NumericalRejection):
    pass


class WindingRejected(NumericalRejection):
    pass


class BudgetExhausted(NumericalRejection):
    """Truncation could not meet the requested error target."""


class TransversalityError(NumericalRejection):
    pass


class CurveContainedError(NumericalRejection):
    """The curve lies inside the divisor; its intersection is not discrete."""
