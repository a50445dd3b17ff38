"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CatalysisError(Exception):
    """Base class for all errors raised by this package."""


class NotNormalized(CatalysisError, ValueError):
    pass


class NegativeEntry(CatalysisError, ValueError):
    pass


class DimensionMismatch(CatalysisError, ValueError):
    pass


class IndistinguishableEntropy(CatalysisError):
    """Entropy comparison reached the precision cap without separating."""


class DimensionTooHigh(CatalysisError):
    pass


class Unbounded(CatalysisError):
    pass


class TooLarge(CatalysisError):
    """A combinatorial or grid enumeration would exceed its configured cap."""


class InvalidOrdering(CatalysisError, ValueError):
    pass


class NotIncomparable(CatalysisError):
    """The pair is LOCC comparable, so catalysis questions are trivial."""


class VerticesUnavailable(CatalysisError):
    pass


class Unsupported(CatalysisError):
    pass
