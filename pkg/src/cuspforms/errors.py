"""Exception hierarchy shared across the package."""


class CuspFormsError(Exception):
    """Base class for all package errors."""


class PreconditionError(CuspFormsError, ValueError):
    """An operation was called outside its documented domain."""


class LaurentDomainError(PreconditionError):
    """Evaluation at z = 0 of a series with negative powers."""


class NotExactError(PreconditionError):
    """The form has a nonzero period, so it has no single-valued potential."""


class PeriodMismatchError(PreconditionError):
    """A form's period disagrees with the prescribed one."""


class InfeasibleConstraintError(PreconditionError):
    """The period constraint cannot be met inside the coefficient window."""


class InsufficientSamplesError(PreconditionError):
    """Too few, or too shallow, radius samples for a growth classification."""


class ParameterOrderError(PreconditionError):
    """Band parameters violate 0 <= a <= r <= R."""


class NormOverflowError(CuspFormsError, OverflowError):
    """A norm term is not representable as a finite double."""


class VerificationError(CuspFormsError, AssertionError):
    """A numerical identity or inequality failed beyond its tolerance."""
