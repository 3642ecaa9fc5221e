"""Exception hierarchy shared by every module."""


class AbeldetError(Exception):
    """Base class for all library errors."""


class InvalidParameter(AbeldetError, ValueError):
    pass


class NoRoots(AbeldetError, ValueError):
    """Raised for a constant polynomial handed to a root finder."""


class SolverFailure(AbeldetError, ArithmeticError):
    pass


class DegenerateInput(AbeldetError, ValueError):
    pass


class UnsupportedChart(AbeldetError, ValueError):
    """The coordinate chart does not satisfy h_0 != 0 and h_{n+1} != 0."""


class NongenericInput(AbeldetError, ValueError):
    """The top homogeneous part has a repeated zero line."""


class RangeError(AbeldetError, OverflowError):
    pass


class PoleError(AbeldetError, ZeroDivisionError):
    pass


class ProximityError(AbeldetError):
    """Branch tracking stalled near a branch point.

    Attributes
    ----------
    x : complex
        Position where the step size underflowed.
    branch_point : complex or None
        Closest branch point, when it could be located.
    """

    def __init__(self, message, x=None, branch_point=None):
        super().__init__(message)
        self.x = x
        self.branch_point = branch_point


class TrackingFailure(AbeldetError):
    pass


class HomotopyFailure(AbeldetError):
    def __init__(self, message, s=None):
        super().__init__(message)
        self.s = s


class InvalidHomotopy(AbeldetError, ValueError):
    def __init__(self, message, s=None):
        super().__init__(message)
        self.s = s


class AccuracyFailure(AbeldetError, ArithmeticError):
    pass


class PolySyntaxError(AbeldetError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset
