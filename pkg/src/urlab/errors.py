"""Exception types raised across urlab."""


class URLabError(Exception):
    """Base class for all urlab errors."""


class ValidationError(URLabError, ValueError):
    """An object failed its structural invariants (Hermiticity, trace, positivity...)."""


class DimensionMismatch(URLabError, ValueError):
    pass


class BoundarySingularity(URLabError, ArithmeticError):
    """Fisher information diverges because a vanishing probability moves at finite speed."""


class NoOrthogonalization(URLabError, RuntimeError):
    pass


class TrivialGenerator(URLabError, ValueError):
    """The generator does not move the state, so no bound-saturating observable exists."""


class UndefinedBound(URLabError, ZeroDivisionError):
    pass


class TruncationError(URLabError, ValueError):
    """A Fock-space cutoff is too small for the requested accuracy."""

    def __init__(self, message, suggested_cutoff=None):
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff
