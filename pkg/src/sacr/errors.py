"""Exception hierarchy shared by every module of the package."""


class SacrError(Exception):
    """Base class for all package errors."""


class NumericalError(SacrError):
    """A factorization or optimization could not produce a certified answer."""


class NotPositiveDefinite(NumericalError):
    pass


class MaxIterationsExceeded(NumericalError):
    """Raised by iterative solvers; ``solution`` holds the best iterate found."""

    def __init__(self, message, solution=None):
        super().__init__(message)
        self.solution = solution


class Infeasible(NumericalError):
    pass


class InvalidProblem(SacrError, ValueError):
    pass


class DimensionMismatch(InvalidProblem):
    pass


class ConfigError(SacrError, ValueError):
    pass


class GridTooShort(ConfigError):
    pass


class DataError(SacrError):
    """Problems with user-supplied data files or arrays."""


class ParseError(DataError):
    def __init__(self, message, row=None, col=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if col is not None:
            where.append(f"column {col}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.col = col


class RaggedRows(DataError):
    pass


class MissingValues(DataError):
    def __init__(self, rows):
        self.rows = list(rows)
        super().__init__(f"missing cells in rows {self.rows}")


class NonBinaryLabels(DataError):
    pass


class BothClassesRequired(DataError):
    pass


class GridMismatch(DataError):
    pass


class MissingStandardization(DataError):
    pass


class TOutsideKnotRange(DataError, ValueError):
    pass


class KTooLarge(ConfigError):
    pass


class LengthMismatch(DataError, ValueError):
    pass


class AllWeightsInfinite(NumericalError):
    pass
