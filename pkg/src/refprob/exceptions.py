"""Exception types raised across the package."""


class RefprobError(Exception):
    """Base class for all package errors."""


class DimensionError(RefprobError, ValueError):
    """Operands have incompatible or invalid shapes."""


class ValidationError(RefprobError, ValueError):
    """An input violates a mathematical invariant (Hermiticity, unit trace, ...)."""


class InputError(RefprobError, ValueError):
    """An argument is outside its supported range."""


class UnsupportedConfiguration(RefprobError):
    """The requested computation needs a property the device or ensemble lacks."""


class PreconditionError(RefprobError, ValueError):
    """A vector argument is outside the subspace an operation requires."""
