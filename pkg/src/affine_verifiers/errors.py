"""Exception hierarchy shared by all modules."""


class AffineVerifierError(Exception):
    """Base class for every error raised by this package."""


# -- core ------------------------------------------------------------------

class SumNotOne(AffineVerifierError, ValueError):
    def __init__(self, actual):
        super().__init__(f"entries sum to {actual}, expected 1")
        self.actual = actual


class ColumnSumNotOne(AffineVerifierError, ValueError):
    def __init__(self, col_index, actual):
        super().__init__(f"column {col_index} sums to {actual}, expected 1")
        self.col_index = col_index
        self.actual = actual


class DimensionMismatch(AffineVerifierError, ValueError):
    pass


# -- encoding --------------------------------------------------------------

class InvalidSymbol(AffineVerifierError, ValueError):
    pass


class NotDiverged(AffineVerifierError, ValueError):
    pass


# -- machine ---------------------------------------------------------------

class MachineError(AffineVerifierError):
    pass


class UnknownOperator(MachineError, KeyError):
    pass


class InvalidOperator(MachineError, ValueError):
    pass


class MissingTransition(MachineError, KeyError):
    pass


class HeadOutOfTape(MachineError, IndexError):
    pass


class Halted(MachineError):
    pass


# -- protocols / analysis --------------------------------------------------

class UnsupportedParams(AffineVerifierError, ValueError):
    pass


class UnresolvedChoice(AffineVerifierError, ValueError):
    pass


class StrategyDoesNotClose(AffineVerifierError, RuntimeError):
    """The computation graph under a strategy kept growing past the node cap."""


class InconclusiveAtDepth(AffineVerifierError, ArithmeticError):
    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


# -- cli -------------------------------------------------------------------

class ParseError(AffineVerifierError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class AlphabetMismatch(AffineVerifierError, ValueError):
    pass
