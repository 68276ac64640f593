"""Exception types shared across the package."""


class LevelCurveError(Exception):
    """Base class for all errors raised by this package."""


class FunctionSpecError(LevelCurveError):
    """Malformed function/domain specification string or illegal construction."""


class RootFindingError(LevelCurveError):
    """Polynomial root finder failed to converge; carries the worst residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class TraceError(LevelCurveError):
    """Level-curve tracing failed (seed divergence, step underflow, runaway arc)."""


class TopologyError(LevelCurveError):
    """Extracted graph/order structure violates a structural law it must satisfy."""


class CertificateError(LevelCurveError):
    """A numerical certificate of a theorem-level property failed."""
