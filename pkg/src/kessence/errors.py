"""Exception types shared across the package.

Numeric guards raise rather than returning NaN so that callers can decide
whether a degenerate point is fatal (library use) or just a NAN cell in a
CSV row (the CLI scans).
"""


class KessenceError(Exception):
    """Base class for all package-specific errors."""


class DegenerateDenominator(KessenceError):
    """A rational expression was evaluated within tolerance of its pole."""


class InvalidGrid(KessenceError):
    """Sampling grid request violates x_min < x_max or n_points >= 2."""


class GridTooCoarse(KessenceError):
    """Grid spacing does not resolve the wall thickness (spacing > 1/(10 b))."""


class SingularMassMatrix(KessenceError):
    """The coefficient multiplying the field acceleration vanished."""


class StepFailure(KessenceError):
    """Adaptive step control could not meet the requested tolerance."""


class FitDomain(KessenceError):
    """Scaling fit requires X > X0 on every tail row."""


class ConfigError(KessenceError):
    """Configuration file is malformed, incomplete, or has unknown keys."""
