"""Structural features, reordering algorithms and a learned selector for sparse solves.

The package picks one of four fill- or bandwidth-reducing orderings (RCM,
AMD, ND, HYBRID) for a sparse matrix from twelve cheap structural features.
"""

from .errors import (
    ConfigError,
    CorruptArchive,
    DimensionMismatch,
    EmptyDataset,
    FetchError,
    IncompleteRecord,
    ParseError,
    ReorderError,
    ReportError,
    SchemaError,
    UnsupportedField,
    UnsupportedFormat,
    UnsupportedVersion,
)
from .features import FEATURE_NAMES, FeatureVector, bandwidth, extract_features, profile
from .fill import (
    CostReport,
    TimingRecord,
    elimination_game_fill,
    elimination_tree,
    etree_column_counts,
    label_from_timings,
    proxy_costs,
    proxy_label,
    read_timings,
    write_timings,
)
from .matrix import AdjacencyGraph, Permutation, SparseMatrixCSR, apply_permutation, invert_permutation, symmetrize
from .mmio import fetch_collection_matrix, parse_matrix_market, read_matrix_market, write_matrix_market
from .orderings import (
    LABELS,
    NDConfig,
    OrderingLabel,
    hybrid_ordering,
    minimum_degree_ordering,
    nested_dissection_ordering,
    order_by_label,
    rcm_ordering,
)
from .report import ReportSummary, summarize

__version__ = "0.1.0"

__all__ = [
    "AdjacencyGraph",
    "ConfigError",
    "CorruptArchive",
    "CostReport",
    "DimensionMismatch",
    "EmptyDataset",
    "FEATURE_NAMES",
    "FeatureVector",
    "FetchError",
    "IncompleteRecord",
    "LABELS",
    "NDConfig",
    "OrderingLabel",
    "ParseError",
    "Permutation",
    "ReorderError",
    "ReportError",
    "ReportSummary",
    "SchemaError",
    "SparseMatrixCSR",
    "TimingRecord",
    "UnsupportedField",
    "UnsupportedFormat",
    "UnsupportedVersion",
    "apply_permutation",
    "bandwidth",
    "elimination_game_fill",
    "elimination_tree",
    "etree_column_counts",
    "extract_features",
    "fetch_collection_matrix",
    "hybrid_ordering",
    "invert_permutation",
    "label_from_timings",
    "minimum_degree_ordering",
    "nested_dissection_ordering",
    "order_by_label",
    "parse_matrix_market",
    "profile",
    "proxy_costs",
    "proxy_label",
    "rcm_ordering",
    "read_matrix_market",
    "read_timings",
    "summarize",
    "symmetrize",
    "write_matrix_market",
    "write_timings",
]
