"""Exception and warning types shared across the package."""


class SpamEqError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(SpamEqError):
    """Scenario configuration is malformed (bad schema, unknown keys, bad values)."""


class ConvergenceError(SpamEqError):
    """A solver failed to converge or two solution routes disagree."""


class InfeasibleSpamError(ValueError, SpamEqError):
    """Requested spam volume does not fit in the block."""


class UnboundedPlateauError(ValueError, SpamEqError):
    """Plateau block size diverges (zero gas price floor)."""


class NonMonotoneShareWarning(UserWarning):
    """Marginal user share is not monotone for the supplied demand curve."""
