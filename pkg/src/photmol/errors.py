"""Exception types raised by photmol."""


class PhotmolError(Exception):
    """Base class for all library errors."""


class DistributionPoleError(PhotmolError, ValueError):
    """Bose factor evaluated at omega == mu (caller must regularize or mask)."""


class GridCoverageError(PhotmolError, ValueError):
    """A grid is too narrow or too coarse for the requested quantity."""


class QuadratureError(PhotmolError, RuntimeError):
    """Requested tolerance not reached.

    ``achieved`` carries the final error estimate.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NoBracketError(PhotmolError, ValueError):
    """No sign change of the T-matrix denominator in the searched range."""


class ConfigError(PhotmolError, ValueError):
    """Invalid run configuration."""
