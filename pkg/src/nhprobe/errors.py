"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested Hilbert-space dimension exceeds the dense-matrix budget."""


class NotPositiveSemidefiniteError(ValueError):
    """Matrix has an eigenvalue below the allowed clamp tolerance."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NotTopologicalError(RuntimeError):
    """No isolated zero-mode pair found.  A legitimate null result, not a bug."""


class TraceUnderflowError(ArithmeticError):
    """Pre-normalization trace underflowed; renormalize more often."""


class SingularParameterError(ValueError):
    """Closed-form expression is singular at the requested parameters."""


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""
