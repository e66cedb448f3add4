"""Exception and warning types shared by all modules."""


class ValidationError(ValueError):
    """An argument violates a documented precondition."""


class ConstructionError(RuntimeError):
    """A geometric certificate failed while building a domain object."""


class NumericIntegrityError(ArithmeticError):
    """A computed quantity violates a guaranteed numerical property.

    Raised when a result is provably wrong (cancellation past a guard,
    imaginary residue on a real quantity, loss of positive
    semidefiniteness), as opposed to merely inaccurate.
    """


class AccuracyWarning(UserWarning):
    """A quadrature result did not stabilize under order doubling."""
