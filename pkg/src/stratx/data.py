"""Tabular dataset container, CSV ingestion and categorical label encoding."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError

NUMERIC = "numeric"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class ColumnMeta:
    name: str
    kind: str = NUMERIC
    category_labels: tuple[str, ...] = ()

    @property
    def is_categorical(self) -> bool:
        return self.kind == CATEGORICAL


@dataclass(frozen=True)
class Dataset:
    """Feature matrix ``features`` (n x p, float64), response ``response`` (n,)
    and per-column metadata. Categorical columns hold integer codes as floats.

    Arrays are made read-only on construction so a dataset can be shared
    between workers.
    """

    features: np.ndarray
    response: np.ndarray
    col_meta: tuple[ColumnMeta, ...]
    response_name: str = "y"

    def __post_init__(self):
        X = np.array(self.features, dtype=np.float64, copy=True)
        y = np.array(self.response, dtype=np.float64, copy=True)
        if X.ndim != 2:
            raise DataError(f"features must be 2-D, got shape {X.shape}")
        if y.ndim != 1 or len(y) != X.shape[0]:
            raise DataError(f"response length {y.shape} does not match {X.shape[0]} rows")
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise DataError("dataset needs at least one row and one feature column")
        if len(self.col_meta) != X.shape[1]:
            raise DataError("col_meta length does not match number of feature columns")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("features and response must be finite (no missing values)")
        for c, meta in enumerate(self.col_meta):
            if meta.is_categorical:
                k = len(meta.category_labels)
                codes = X[:, c]
                if not np.array_equal(np.unique(codes), np.arange(k, dtype=np.float64)):
                    raise DataError(f"column {meta.name!r}: codes must be exactly 0..{k - 1}")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "response", y)
        object.__setattr__(self, "col_meta", tuple(self.col_meta))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def names(self) -> list[str]:
        return [m.name for m in self.col_meta]

    def column_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise DataError(f"no feature column named {name!r}") from None

    def take(self, rows: np.ndarray) -> "Dataset":
        """Row subset (e.g. a bootstrap sample). Category labels are kept even
        if some codes no longer occur, so the code invariant is relaxed here."""
        return _unchecked(self.features[rows], self.response[rows], self.col_meta, self.response_name)


def _unchecked(X, y, meta, response_name) -> Dataset:
    ds = object.__new__(Dataset)
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    X.setflags(write=False)
    y.setflags(write=False)
    object.__setattr__(ds, "features", X)
    object.__setattr__(ds, "response", y)
    object.__setattr__(ds, "col_meta", tuple(meta))
    object.__setattr__(ds, "response_name", response_name)
    return ds


def encode_labels(values: Sequence[str]) -> tuple[np.ndarray, tuple[str, ...]]:
    """Map string labels to codes 0..K-1, labels sorted lexicographically."""
    labels = tuple(sorted(set(values)))
    lookup = {lab: i for i, lab in enumerate(labels)}
    codes = np.fromiter((lookup[v] for v in values), dtype=np.float64, count=len(values))
    return codes, labels


def decode_labels(codes: Iterable[float], labels: Sequence[str]) -> list[str]:
    return [labels[int(c)] for c in codes]


def from_columns(columns: dict[str, Sequence], response: Sequence[float],
                 categorical: Iterable[str] = (), response_name: str = "y") -> Dataset:
    """Build a dataset from named columns; categorical columns may hold any
    hashable labels (converted with ``str``)."""
    categorical = set(categorical)
    unknown = categorical - set(columns)
    if unknown:
        raise DataError(f"categorical columns not present: {sorted(unknown)}")
    meta, cols = [], []
    for name, values in columns.items():
        if name in categorical:
            codes, labels = encode_labels([str(v) for v in values])
            cols.append(codes)
            meta.append(ColumnMeta(name, CATEGORICAL, labels))
        else:
            cols.append(np.asarray(values, dtype=np.float64))
            meta.append(ColumnMeta(name))
    X = np.column_stack(cols) if cols else np.empty((len(response), 0))
    return Dataset(X, np.asarray(response, dtype=np.float64), tuple(meta), response_name)


def load_csv(path: str | Path, response_col: str, categorical_cols: Iterable[str] = ()) -> Dataset:
    """Read a headered UTF-8 CSV into a :class:`Dataset`.

    Feature columns keep their CSV order. Empty cells and non-numeric values in
    numeric columns are rejected rather than imputed.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    categorical = list(dict.fromkeys(categorical_cols))
    with path.open(newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = [r for r in reader if r]

    if len(set(header)) != len(header):
        raise DataError(f"{path}: duplicate column names in header")
    for col in [response_col, *categorical]:
        if col not in header:
            raise DataError(f"{path}: missing column {col!r}")
    if response_col in categorical:
        raise DataError("response column cannot be categorical")
    if not rows:
        raise DataError(f"{path}: no data rows")

    width = len(header)
    raw: list[list[str]] = [[] for _ in range(width)]
    for r, row in enumerate(rows, start=1):
        if len(row) != width:
            raise DataError(f"row {r} has {len(row)} fields, expected {width}")
        for c, cell in enumerate(row):
            cell = cell.strip()
            if cell == "":
                raise DataError(f"missing value at row {r}, col {header[c]}")
            raw[c].append(cell)

    def numeric(c: int) -> np.ndarray:
        out = np.empty(len(rows))
        for r, cell in enumerate(raw[c]):
            try:
                v = float(cell)
            except ValueError:
                raise DataError(f"non-numeric value {cell!r} at row {r + 1}, col {header[c]}") from None
            if not math.isfinite(v):
                raise DataError(f"missing value at row {r + 1}, col {header[c]}")
            out[r] = v
        return out

    cat_set = set(categorical)
    columns: dict[str, Sequence] = {}
    for c, name in enumerate(header):
        if name == response_col:
            continue
        columns[name] = raw[c] if name in cat_set else numeric(c)
    if len(columns) < 2:
        raise DataError("need at least two feature columns besides the response")
    y = numeric(header.index(response_col))
    return from_columns(columns, y, categorical, response_name=response_col)


def drop_column(ds: Dataset, j: int) -> Dataset:
    """Return the dataset without feature column ``j``; rows are untouched."""
    if not 0 <= j < ds.p:
        raise DataError(f"column index {j} out of range for {ds.p} feature columns")
    if ds.p == 1:
        raise DataError("cannot drop the only feature column")
    keep = [c for c in range(ds.p) if c != j]
    meta = [ds.col_meta[c] for c in keep]
    return _unchecked(ds.features[:, keep], ds.response, meta, ds.response_name)
