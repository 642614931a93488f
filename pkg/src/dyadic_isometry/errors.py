"""Exception types raised by the library."""


class DyadicError(Exception):
    """Base class for all library errors."""


class MalformedInput(DyadicError, ValueError):
    pass


class EvenDenominator(MalformedInput):
    pass


class InsufficientPrecision(DyadicError):
    pass


class PrecisionLoss(InsufficientPrecision):
    pass


class ZeroElement(DyadicError, ValueError):
    """A square-class operation received zero."""


class Degenerate(DyadicError, ValueError):
    pass


class ZeroNorm(DyadicError, ValueError):
    pass


class RankError(DyadicError, ValueError):
    pass


class RankMismatch(RankError):
    pass


class FieldMismatch(DyadicError, ValueError):
    pass


class InternalVerificationFailure(DyadicError, RuntimeError):
    """A constructed object failed its own contract check (a bug)."""


class RMismatch(MalformedInput):
    """Two symbols with different R-sequences were compared."""
