"""Exception hierarchy shared by all modules."""


class LindbladForgeError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(LindbladForgeError, ValueError):
    """Array shapes are incompatible with the requested operation."""


class ValidationError(LindbladForgeError, ValueError):
    """Input data violates a structural invariant (sign, symmetry, range)."""


class ContractViolation(LindbladForgeError, ValueError):
    """A precondition of an operation does not hold (e.g. non-Hermitian input)."""


class NotExpandableError(LindbladForgeError):
    """A superoperator is not in the span of the dissipation generators."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotCompletelyPositiveError(LindbladForgeError):
    """A coefficient matrix has a negative eigenvalue beyond tolerance."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue
