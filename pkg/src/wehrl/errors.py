"""Exception types raised by the library."""


class WehrlError(ValueError):
    """Base class for all validation errors raised by this package."""


class NotNormalized(WehrlError):
    pass


class DegenerateState(WehrlError):
    pass


class CountMismatch(WehrlError):
    pass


class CeilingExceeded(WehrlError):
    pass


class NotEmbeddable(WehrlError):
    pass


class DegenerateGeometry(WehrlError):
    pass
