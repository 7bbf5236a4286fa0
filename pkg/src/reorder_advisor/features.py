"""Structural feature vector of a square sparse matrix."""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from . import kernels
from .errors import DimensionMismatch
from .matrix import SparseMatrixCSR, symmetrize

FEATURE_NAMES = (
    "dimension",
    "nnz",
    "nnz_ratio",
    "nnz_max",
    "nnz_min",
    "nnz_avg",
    "nnz_std",
    "degree_max",
    "degree_min",
    "degree_avg",
    "bandwidth",
    "profile",
)


@dataclass(frozen=True)
class FeatureVector:
    dimension: int
    nnz: int
    nnz_ratio: float
    nnz_max: int
    nnz_min: int
    nnz_avg: float
    nnz_std: float
    degree_max: int
    degree_min: int
    degree_avg: float
    bandwidth: int
    profile: int

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _require_square(m):
    if not m.is_square:
        raise DimensionMismatch(f"expected a square matrix, got {m.n_rows}x{m.n_cols}")


def bandwidth(m: SparseMatrixCSR) -> int:
    """Largest ``|i - j|`` over stored entries (0 for empty/diagonal matrices)."""
    _require_square(m)
    return kernels.bandwidth_profile(m.n_rows, m.row_ptr, m.col_idx)[0]


def profile(m: SparseMatrixCSR) -> int:
    """Sum over rows of ``i - (leftmost stored column)``.

    Rows with no entry at or left of the diagonal contribute 0.
    """
    _require_square(m)
    return kernels.bandwidth_profile(m.n_rows, m.row_ptr, m.col_idx)[1]


def extract_features(m: SparseMatrixCSR) -> FeatureVector:
    _require_square(m)
    n = m.n_rows
    if n < 1:
        raise DimensionMismatch("features need a matrix of dimension >= 1")
    counts = m.row_counts().astype(np.float64)
    degrees = symmetrize(m).degrees()
    bw, prof = kernels.bandwidth_profile(n, m.row_ptr, m.col_idx)
    return FeatureVector(
        dimension=n,
        nnz=m.nnz,
        nnz_ratio=m.nnz / float(n * n),
        nnz_max=int(counts.max()),
        nnz_min=int(counts.min()),
        nnz_avg=float(counts.mean()),
        nnz_std=float(counts.std()),
        degree_max=int(degrees.max()),
        degree_min=int(degrees.min()),
        degree_avg=float(degrees.mean()),
        bandwidth=bw,
        profile=prof,
    )
