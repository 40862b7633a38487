"""Exception types shared across the simulator."""


class ConfigError(Exception):
    """Configuration file failed schema or semantic validation."""


class ConstraintViolation(Exception):
    """A physical or bookkeeping constraint was exceeded (e.g. mode count)."""


class TruncationError(Exception):
    """The requested Fock cutoff cannot bound the truncation error."""


class OracleValidationError(Exception):
    """Cross-validation between independent computation paths failed."""


class FitError(Exception):
    """Curve fit did not converge; carries the best parameters seen so far."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
