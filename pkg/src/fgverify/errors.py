"""Exception hierarchy shared by every module."""


class FGError(Exception):
    """Base class for all structured failures raised by fgverify."""


class PoleError(FGError, ZeroDivisionError):
    """A denominator vanished (or came within the pole guard)."""


class BaseNotContracting(FGError, ValueError):
    """An infinite product was requested with |q| >= 1."""


class TruncationInsufficient(FGError, ValueError):
    """The retained tail of a truncated product or series is too large."""


class ZeroArgument(FGError, ValueError):
    """A function that needs a nonzero argument received zero."""


class IndexOutOfWindow(FGError, IndexError):
    pass


class ZeroPivot(FGError, ValueError):
    pass


class NotSelfOrthogonal(FGError, ValueError):
    pass


class NonconvergentLimit(FGError, ArithmeticError):
    pass


class UnknownTarget(FGError, KeyError):
    pass


class ConfigError(FGError, ValueError):
    pass
