"""Exception and warning taxonomy shared by all momentumlab modules."""


class MomentumLabError(Exception):
    """Base class for all errors raised by this package."""


class InputError(MomentumLabError, ValueError):
    """Malformed or inconsistent input data (dimension mismatch, bad invariant)."""


class PreconditionError(MomentumLabError, ValueError):
    """Input is well-formed but violates a documented operation precondition."""


class CapabilityError(MomentumLabError):
    """Request exceeds the supported problem size of this implementation."""


class ComputationError(MomentumLabError, RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""


class DomainError(MomentumLabError, ValueError):
    """A map left the domain on which the computation is defined."""


class TruncationWarning(UserWarning):
    """Result computed on a flagged truncation; residuals reflect truncation error."""


class ClusterWarning(UserWarning):
    """Nearby spectral data were merged into a single cluster."""
