"""Exception types shared across the library."""


class EberleinError(Exception):
    """Base class for all library errors."""


class ContractViolation(EberleinError, ValueError):
    """An input broke a documented precondition."""


class DegeneracyError(EberleinError, ArithmeticError):
    """A shear denominator vanished with a nonzero numerator."""


class NonFiniteIterateError(EberleinError, FloatingPointError):
    """The iterate picked up a NaN/Inf entry; carries the offending step."""

    def __init__(self, step: int):
        super().__init__(f"non-finite entry in iterate at step {step}")
        self.step = step


class IterationBudgetError(EberleinError, RuntimeError):
    """An iterative helper ran out of its step budget; carries the best estimate."""

    def __init__(self, message: str, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ParseError(EberleinError, ValueError):
    """Malformed input file; carries line/column information."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column
