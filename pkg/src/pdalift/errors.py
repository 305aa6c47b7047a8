"""Exception types shared across the package."""

from __future__ import annotations


class PdaError(Exception):
    """Base class for all errors raised by this package."""


class NotAPda(PdaError):
    """The array violates the uniform-star or the swap rule."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NonInjectiveMap(PdaError):
    pass


class MalformedPda(PdaError):
    """Raised while decoding a serialized array."""


class ParameterError(PdaError, ValueError):
    """Family parameters outside their admissible range."""


class CompatibilityError(PdaError):
    """A set of arrays fails the pairwise compatibility test."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ConstructionError(PdaError):
    pass


class BlockShapeMismatch(ConstructionError):
    pass


class SymbolCollision(ConstructionError):
    pass


class ConstructionFailure(ConstructionError):
    """A randomized construction exhausted its attempts."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace


class DecodeFailure(PdaError):
    """A user could not recover a requested subfile."""


class ExhaustedAttempts(ConstructionFailure):
    """Every seeded attempt of a randomized construction failed."""

    def __init__(self, message: str, outcome=None):
        super().__init__(message, trace=outcome)
        self.outcome = outcome


class SubpacketizationMismatch(PdaError, ValueError):
    """File size or subfile count does not fit the array."""


class BadDemand(PdaError, ValueError):
    """A demand vector has the wrong length or names a missing file."""
