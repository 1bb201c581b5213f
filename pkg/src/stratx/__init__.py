"""Partial dependence curves computed from training data without a fitted model."""
from .catpd import CatEffect, CatStratPDParams, LeafDeltas, catstratpd, leaf_deltas, merge_deltas
from .data import ColumnMeta, Dataset, drop_column, from_columns, load_csv
from .errors import DataError, InsufficientSupportError, MergeError, StratxError
from .numpd import (PDCurve, SlopeSegment, StratPDParams, StratxWarning, aggregate_slopes,
                    filter_and_integrate, leaf_slopes, stratpd)
from .stratify import StratifyParams, StratTree, fit_stratification, leaves

__version__ = "0.1.0"

__all__ = [
    "CatEffect", "CatStratPDParams", "ColumnMeta", "DataError", "Dataset", "InsufficientSupportError",
    "LeafDeltas", "MergeError", "PDCurve", "SlopeSegment", "StratPDParams", "StratTree", "StratifyParams",
    "StratxError", "StratxWarning", "aggregate_slopes", "catstratpd", "drop_column", "filter_and_integrate",
    "fit_stratification", "from_columns", "leaf_deltas", "leaf_slopes", "leaves", "load_csv", "merge_deltas",
    "stratpd",
]
