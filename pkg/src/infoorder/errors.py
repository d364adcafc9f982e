"""Exception hierarchy shared by all modules."""


class InfoOrderError(ValueError):
    """Base class for invalid input to any routine in the package."""


class DimensionMismatch(InfoOrderError):
    pass


class NegativeEntry(InfoOrderError):
    pass


class ZeroMass(InfoOrderError):
    pass


class IndexOutOfRange(InfoOrderError):
    pass


class ParameterOutOfRange(InfoOrderError):
    pass


class InfeasibleParams(InfoOrderError):
    """Raised when RIO parameters violate ``1 + sum_{j<=k} A^i_j > 0``."""


class NotHermitian(InfoOrderError):
    pass


class NotPSD(InfoOrderError):
    pass


class ZeroTrace(InfoOrderError):
    pass


class ConvergenceFailure(InfoOrderError):
    pass


class NotIncreasing(InfoOrderError):
    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"chain is not increasing at index {index}")


class NotConvergent(InfoOrderError):
    pass


class PreconditionFailed(InfoOrderError):
    pass


class WeightMismatch(InfoOrderError):
    pass


class UnknownToken(InfoOrderError, KeyError):
    pass


class ZeroVector(InfoOrderError):
    pass


class ParseError(InfoOrderError):
    def __init__(self, line, message):
        self.line = line
        super().__init__(f"line {line}: {message}")


class NegativeValue(InfoOrderError):
    def __init__(self, token, index, value):
        self.token = token
        self.index = index
        super().__init__(f"token {token!r}: entry {index} is negative ({value!r})")


class EmptyFile(InfoOrderError):
    pass


class UnsupportedDimension(InfoOrderError):
    pass
