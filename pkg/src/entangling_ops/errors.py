"""Exception types shared across the package."""


class EntanglingOpsError(Exception):
    """Base class for all package errors."""


class DimensionError(EntanglingOpsError, ValueError):
    """Shapes or subsystem dimensions do not line up."""


class NotHermitianError(EntanglingOpsError, ValueError):
    """An operation that needs a Hermitian operator was handed something else."""


class ValidationError(EntanglingOpsError, ValueError):
    """Input parsed fine but violates a structural requirement (PSD, trace, ...)."""


class ParseError(EntanglingOpsError, ValueError):
    """Input could not be decoded."""


class NumericDomainError(EntanglingOpsError, ValueError):
    """A numeric parameter is outside the domain of the operation."""
