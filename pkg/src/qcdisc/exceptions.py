"""Exception types shared across the package."""


class QcdError(Exception):
    """Base class for all package errors."""


class DimError(QcdError, ValueError):
    """Operand dimensions do not match."""


class DomainError(QcdError, ValueError):
    """A parameter or operand lies outside the domain of the operation."""


class InvalidOperator(DomainError):
    """An operator fails a structural requirement (Hermitian, PSD, unit trace)."""


class Unsupported(QcdError):
    """The requested combination of inputs has no implemented rule."""


class Inconsistent(QcdError):
    """Sampled data violate a precondition the algorithm relies on."""
