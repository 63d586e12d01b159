"""Exception hierarchy shared by the library and the CLI."""


class HMFError(Exception):
    """Base class for domain errors (mapped to exit status 2 by the CLI)."""


class InvalidFieldError(HMFError, ValueError):
    pass


class ZeroIdealError(HMFError, ValueError):
    pass


class NotNarrowClassOneError(HMFError):
    pass


class DomainError(HMFError, ValueError):
    pass


class EmptySpaceError(HMFError):
    pass


class BasisFailureError(HMFError):
    pass


class BoundError(HMFError):
    pass


class UnsupportedDimensionError(HMFError):
    pass


class InconclusiveError(HMFError):
    pass


class CacheCorruptionError(HMFError):
    pass


class InternalError(HMFError):
    """An exact computation contradicted itself; always a bug."""
