"""Exception hierarchy shared by the library and the CLI."""


class RamseyAlgebraError(Exception):
    """Base class for every error raised by this package."""


class AlgebraError(RamseyAlgebraError, ValueError):
    def __init__(self, message, op_name=None):
        super().__init__(message)
        self.op_name = op_name


class NullaryOperation(AlgebraError):
    pass


class TableSize(AlgebraError):
    pass


class EntryOutOfRange(AlgebraError):
    pass


class CarrierTooLarge(RamseyAlgebraError, ValueError):
    pass


class ArityMismatch(RamseyAlgebraError, ValueError):
    pass


class IndexOutOfRange(RamseyAlgebraError, IndexError):
    pass


class ScheduleError(RamseyAlgebraError, ValueError):
    """A reduction schedule whose index blocks are not strictly increasing."""


class EquivalenceViolation(RamseyAlgebraError, AssertionError):
    """The conditions of the finite characterization disagreed (an implementation bug)."""


class FixedPointPresent(RamseyAlgebraError, ValueError):
    def __init__(self, point):
        super().__init__(f"map has a fixed point at {point}")
        self.point = point


class InvalidResidueSystem(RamseyAlgebraError, ValueError):
    pass


class OverlappingMonomials(RamseyAlgebraError, ValueError):
    pass


class IndexOverlap(RamseyAlgebraError, ValueError):
    pass


class DegenerateEquation(RamseyAlgebraError, ArithmeticError):
    pass


class ModeScaleExceeded(RamseyAlgebraError, ValueError):
    pass


class ScaleExceeded(RamseyAlgebraError, ValueError):
    pass


class InsufficientVectors(RamseyAlgebraError, ValueError):
    pass


class ParseError(RamseyAlgebraError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
