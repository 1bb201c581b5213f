class StratxError(Exception):
    """Base class for errors raised by stratx."""


class DataError(StratxError, ValueError):
    """Input data is malformed or inconsistent with the request."""


class InsufficientSupportError(StratxError):
    """Too few x values are supported by slopes to integrate a curve."""


class MergeError(StratxError):
    """Leaf delta vectors kept merging past the pass limit."""
