"""Feature/label tables and their CSV form."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

import numpy as np

from ..errors import ParseError, SchemaError
from ..features import FEATURE_NAMES

CSV_HEADER = ("matrix",) + FEATURE_NAMES + ("label",)
_INT_FEATURES = {"dimension", "nnz", "nnz_max", "nnz_min", "degree_max", "degree_min", "bandwidth", "profile"}


@dataclass(eq=False)
class Dataset:
    names: list
    X: np.ndarray
    y: list

    def __post_init__(self):
        self.names = [str(n) for n in self.names]
        X = np.asarray(self.X, dtype=np.float64)
        self.X = X.reshape(len(self.names), -1) if X.size else X.reshape(len(self.names), len(FEATURE_NAMES))
        self.y = ["" if v is None else str(v) for v in self.y]
        if not (len(self.names) == self.X.shape[0] == len(self.y)):
            raise SchemaError("names, feature rows and labels differ in length")
        if not np.all(np.isfinite(self.X)):
            raise SchemaError("feature matrix contains non-finite values")

    def __len__(self):
        return len(self.names)

    @property
    def labeled(self):
        return all(self.y)

    def subset(self, rows) -> Dataset:
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset([self.names[i] for i in rows], self.X[rows], [self.y[i] for i in rows])

    def with_labels(self, labels) -> Dataset:
        return Dataset(list(self.names), self.X.copy(), [str(v) for v in labels])

    def classes(self):
        return sorted(set(self.y))


def _fmt(name, value):
    if name in _INT_FEATURES:
        return str(int(value))
    return repr(float(value))


def format_row(name, features, label="") -> list:
    return [name] + [_fmt(f, v) for f, v in zip(FEATURE_NAMES, features)] + [str(label or "")]


def write_dataset(d: Dataset, target=None):
    """Write ``d`` as CSV to a path or stream; returns the text when ``target`` is None."""
    if target is None:
        buf = io.StringIO()
        write_dataset(d, buf)
        return buf.getvalue()
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", newline="") as fh:
            return write_dataset(d, fh)
    w = csv.writer(target, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for name, row, label in zip(d.names, d.X, d.y):
        w.writerow(format_row(name, row, label))
    return None


def read_dataset(source) -> Dataset:
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            return read_dataset(fh)
    reader = csv.reader(source)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty dataset file") from None
    missing = [c for c in CSV_HEADER[:-1] if c not in header]
    if missing:
        raise SchemaError(f"dataset CSV lacks columns: {', '.join(missing)}")
    col = {c: header.index(c) for c in header}
    names, rows, labels = [], [], []
    for lineno, rec in enumerate(reader, start=2):
        if not rec or all(not f.strip() for f in rec):
            continue
        try:
            names.append(rec[col["matrix"]].strip())
            rows.append([float(rec[col[f]]) for f in FEATURE_NAMES])
            labels.append(rec[col["label"]].strip() if "label" in col and col["label"] < len(rec) else "")
        except (ValueError, IndexError) as exc:
            raise ParseError(f"bad dataset row: {exc}", lineno) from None
    return Dataset(names, np.array(rows).reshape(len(names), len(FEATURE_NAMES)), labels)
