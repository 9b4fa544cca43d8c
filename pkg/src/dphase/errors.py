"""Exception hierarchy shared by all dphase modules."""


class DphaseError(Exception):
    """Base class for every error raised by the package."""


class DomainError(DphaseError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class PrecisionError(DphaseError, ArithmeticError):
    """A numerical result could not be produced at the requested accuracy."""


class BranchError(DphaseError, ArithmeticError):
    """A fractional power was requested of a non-positive overlap value."""


class ValidationError(DphaseError, ValueError):
    """Input data failed a semantic check (hermiticity, trace, dimension)."""


class ConvergenceError(DphaseError):
    """A convergence sweep did not decrease as required."""
