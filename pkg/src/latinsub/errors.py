"""Exception hierarchy shared by every latinsub module."""


class LatinError(Exception):
    """Base class for all errors raised by latinsub."""


class ParseError(LatinError, ValueError):
    pass


class SymbolOutOfRange(LatinError, ValueError):
    def __init__(self, row, col, symbol, order):
        self.row, self.col, self.symbol = row, col, symbol
        super().__init__(f"symbol {symbol} at ({row}, {col}) is outside 0..{order - 1}")


class RowDuplicate(LatinError, ValueError):
    def __init__(self, row, col, symbol):
        self.row, self.col, self.symbol = row, col, symbol
        super().__init__(f"symbol {symbol} repeated in row {row} (at column {col})")


class ColumnDuplicate(LatinError, ValueError):
    def __init__(self, row, col, symbol):
        self.row, self.col, self.symbol = row, col, symbol
        super().__init__(f"symbol {symbol} repeated in column {col} (at row {row})")


class NotASubsquare(LatinError, ValueError):
    pass


class DomainError(LatinError, ValueError):
    """Parameters fall outside the range where a decision is defined."""


class EmptyCellPresent(LatinError, ValueError):
    pass


class ConditionViolated(LatinError):
    """A construction was requested for parameters where none exists."""


class SearchBudgetExceeded(LatinError):
    pass


class CapacityExceeded(LatinError):
    pass


class BudgetExhausted(LatinError):
    pass


class IntervalViolated(LatinError, ValueError):
    pass


class WitnessMissing(LatinError):
    pass


class ImpossibleOrder(LatinError, ValueError):
    pass
