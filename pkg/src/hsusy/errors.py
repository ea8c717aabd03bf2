"""Exception types raised across the package."""


class HsusyError(Exception):
    """Base class for all package errors."""


class PoleError(HsusyError, ValueError):
    """A Gamma function or series parameter hit a pole."""


class NoConvergence(HsusyError, ArithmeticError):
    """A series did not converge within ``max_terms``."""


class PrecisionLoss(HsusyError, ArithmeticError):
    """Cancellation destroyed more digits than the working precision can absorb."""


class DomainTooNarrow(HsusyError, ValueError):
    """The grid does not contain the decay region of a bound state."""


class SingularTransform(HsusyError, ValueError):
    """A SUSY step would introduce a singularity in the new potential."""

    def __init__(self, message, positions=()):
        super().__init__(message)
        self.positions = list(positions)


class SingularWronskian(SingularTransform):
    pass


class SingularW(SingularTransform):
    pass


class OrderingError(HsusyError, ValueError):
    pass


class NotNormalizable(HsusyError, ValueError):
    pass


class EnergyCollision(HsusyError, ValueError):
    pass


class BadW0(HsusyError, ValueError):
    pass


class NoDecay(HsusyError, ValueError):
    pass


class SectorError(HsusyError, ValueError):
    pass


class NegativeRadicand(HsusyError, ValueError):
    pass


class NotOscillatorLimit(HsusyError, ValueError):
    pass


class ParseError(HsusyError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(HsusyError, ValueError):
    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field


class UnknownCase(HsusyError, KeyError):
    pass
