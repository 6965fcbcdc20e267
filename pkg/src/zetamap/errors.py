"""Exception hierarchy.

Errors split into three families that the command line maps onto exit codes:
validation problems (bad parameters), input-data problems (unreadable or
malformed tables) and numeric failures (orbits hitting a singularity,
overflow, solver breakdown).
"""


class ZetamapError(Exception):
    """Base class for all package errors."""


class ValidationError(ZetamapError, ValueError):
    """A parameter violates an operation's precondition."""


class InputDataError(ZetamapError):
    """Input data could not be turned into a valid table."""


class NumericError(ZetamapError, ArithmeticError):
    """A computation left the range where it is defined."""


class DomainError(NumericError, ValueError):
    """Argument outside the domain of a function (e.g. |x| below the map guard)."""


class MapOverflowError(NumericError, OverflowError):
    """The map produced a non-finite value."""


class DegenerateOrbit(NumericError):
    """An orbit visited a point with zero derivative, so ln|f'| diverges."""

    def __init__(self, index, x):
        super().__init__(f"f'(x) = 0 at orbit index {index} (x = {x!r})")
        self.index = index
        self.x = x


class ConvergenceError(NumericError):
    """Eigensolver failed to converge."""


class DegenerateSpectrum(NumericError):
    """Too many (near-)coincident levels to unfold a spectrum."""


class EmptyInput(ValidationError):
    pass


class NonUniformGrid(ValidationError):
    pass


class DimensionError(ValidationError):
    pass


class ParseError(InputDataError):
    def __init__(self, line_no, line, reason="not a decimal number"):
        super().__init__(f"line {line_no}: {reason}: {line!r}")
        self.line_no = line_no
        self.line = line


class MonotonicityError(InputDataError):
    def __init__(self, index, previous, value):
        super().__init__(
            f"ordinates must be strictly increasing: entry {index} ({value!r}) "
            f"does not exceed entry {index - 1} ({previous!r})"
        )
        self.index = index


class EmptyTable(InputDataError):
    pass


class TooFewZeros(InputDataError):
    pass


class LengthMismatch(InputDataError):
    pass
