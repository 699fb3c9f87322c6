"""Exception hierarchy shared by every module."""


class LsidError(Exception):
    """Base class for all errors raised by lsid."""


class DimensionMismatchError(LsidError, ValueError):
    pass


class NonFiniteError(LsidError, ValueError):
    pass


class NonSquareError(DimensionMismatchError):
    pass


class SingularMatrixError(LsidError, ArithmeticError):
    pass


class RankDeficientError(LsidError, ArithmeticError):
    pass


class InvalidRangeError(LsidError, ValueError):
    pass


class IndexOutOfRangeError(LsidError, IndexError):
    pass


class CapExceededError(LsidError):
    """C(m, n) is larger than the enumeration cap; use the Monte-Carlo route."""


class AllWeightsZeroError(LsidError, ArithmeticError):
    pass


class AllSampledSingularError(LsidError, ArithmeticError):
    pass


class NonSymmetricError(LsidError, ValueError):
    pass


class FormatError(LsidError, ValueError):
    """Malformed CSV input. ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, path=None, line=None, column=None):
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.path = path
        self.line = line
        self.column = column


class ParseError(FormatError):
    pass


class RaggedRowsError(FormatError):
    pass


class EmptyFileError(FormatError):
    pass


class MultiColumnError(FormatError):
    pass
