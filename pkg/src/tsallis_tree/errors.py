"""Exception hierarchy.

Errors fall into two families so the CLI can map them to exit codes:
``DataError`` (bad input files, bad models) and everything else.
"""


class TsallisTreeError(Exception):
    """Base class for all package errors."""


# entropy


class InvalidDistribution(TsallisTreeError, ValueError):
    pass


class NonFiniteOrder(TsallisTreeError, ValueError):
    pass


class DomainError(TsallisTreeError, ValueError):
    pass


# criterion


class InvalidCriterion(TsallisTreeError, ValueError):
    pass


class EmptyNode(TsallisTreeError, ValueError):
    pass


class EmptyChild(TsallisTreeError, ValueError):
    pass


class ChildParentMismatch(TsallisTreeError, ValueError):
    pass


# data / model files


class DataError(TsallisTreeError):
    """Problem with user-supplied data or model documents."""


class ParseError(DataError, ValueError):
    pass


class SchemaMismatch(DataError, ValueError):
    pass


class MissingValue(DataError, ValueError):
    def __init__(self, row: int, column: str):
        super().__init__(f"missing value at row {row}, column {column!r}")
        self.row = row
        self.column = column


class MalformedModel(DataError, ValueError):
    pass


class TooFewInstances(DataError, ValueError):
    pass


class BadFoldCount(TsallisTreeError, ValueError):
    pass


class EmptyDataset(DataError, ValueError):
    pass


class EmptyTestSet(DataError, ValueError):
    pass


class AllZeroDifferences(TsallisTreeError, ValueError):
    pass
