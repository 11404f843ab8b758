"""Exception types shared across the package."""


class ArakGridError(Exception):
    """Base class for all package errors."""


class InputError(ArakGridError):
    """Malformed input: bad grid bounds, unknown names, unreadable files."""


class SceneParseError(InputError):
    """Scene text could not be parsed; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class PreconditionError(InputError):
    """An operation was called outside its stated contract."""


class NotSimplyConnectedError(ArakGridError):
    """The construction is only valid on regions declared simply connected."""


class BuildRefusalError(ArakGridError):
    """The neighborhood construction cannot proceed, e.g. an obstacle sits in
    a component of the complement that has no escape to alpha."""


class AmbiguousRegionError(ArakGridError):
    """A window-truncated component prevents a conclusive answer."""


class CertificateError(ArakGridError):
    """A constructed neighborhood failed its own re-verification.

    The partially built result is attached so callers can inspect which
    certificate component failed; it is never returned as a success.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class ResolutionError(ArakGridError):
    """The grid is too coarse for a reliable phase unwrap; retry with a
    smaller cell size."""


class LiftVerificationError(ArakGridError):
    """The computed logarithm failed its exactness check."""
