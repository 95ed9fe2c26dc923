"""Exception types shared across the package.

Class names mirror the error conditions of the public API contracts, so
callers can catch a specific failure without string matching.
"""


class UpsetError(Exception):
    """Base class for all errors raised by this package."""


class WidthMismatch(UpsetError):
    """Masks with different ground-set widths were combined."""


class EmptyGenerators(UpsetError):
    """An upper set was requested from an empty generator list."""


class TrivialUpperSet(UpsetError):
    """The construction would yield the empty property or the full power set."""


class SizeLimitExceeded(UpsetError):
    """An exact computation was requested beyond its configured cap."""


class MissingMcParams(UpsetError):
    """Monte Carlo estimation needs both a sample count and a seed."""


class NonConvergence(UpsetError):
    """Bisection stopped with a residual far above tolerance."""


class KOutOfRange(UpsetError):
    """Symmetric-polynomial index k outside 1..len(sets)."""


class OutOfRange(UpsetError):
    """Family parameter outside the supported range."""


class CapExceeded(UpsetError):
    """Family generation would enumerate more objects than the configured cap."""


class DegenerateDraw(UpsetError):
    """A random draw produced no usable antichain."""


class EmptyInput(UpsetError):
    """A report was requested over an empty record list."""


class TooFewRecords(UpsetError):
    """Trend classification needs at least three records."""
