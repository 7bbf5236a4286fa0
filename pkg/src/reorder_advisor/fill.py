"""Symbolic Cholesky cost model and label construction.

Two routes to the same :class:`CostReport`:

* :func:`elimination_game_fill` plays the elimination game with Python
  sets.  It is slow and obviously correct, and serves as the oracle.
* :func:`etree_column_counts` builds the elimination tree and counts the
  columns of L by row-subtree traversal in compiled kernels.

Labels come either from the cheapest symbolic factorization
(:func:`proxy_label`) or from measured solve times
(:func:`label_from_timings`).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DimensionMismatch, IncompleteRecord, ParseError
from .matrix import AdjacencyGraph, Permutation, SparseMatrixCSR, symmetrize
from .orderings import LABELS, NDConfig, OrderingLabel, ordering_for_graph

#: tie-break order when several labels cost the same
PRECEDENCE = (OrderingLabel.AMD, OrderingLabel.HYBRID, OrderingLabel.ND, OrderingLabel.RCM)

TIMING_COLUMNS = ("matrix", "rcm", "amd", "nd", "scotch")
_TIMING_LABEL = {
    "rcm": OrderingLabel.RCM,
    "amd": OrderingLabel.AMD,
    "nd": OrderingLabel.ND,
    "scotch": OrderingLabel.HYBRID,
}


@dataclass(frozen=True)
class CostReport:
    fill_in: int
    factor_nnz: int
    flops: int


@dataclass(frozen=True, eq=False)
class EliminationTree:
    parent: np.ndarray
    postorder: np.ndarray

    @property
    def n(self):
        return int(self.parent.size)


def _check(g, p):
    if p.size != g.n:
        raise DimensionMismatch(f"permutation of size {p.size} for graph of {g.n} vertices")


def elimination_game_fill(g: AdjacencyGraph, p: Permutation) -> CostReport:
    _check(g, p)
    adj = [set(g.neighbors(v).tolist()) for v in range(g.n)]
    eliminated = [False] * g.n
    fill = 0
    flops = 0
    for v in p.order().tolist():
        nbrs = [u for u in adj[v] if not eliminated[u]]
        flops += (1 + len(nbrs)) ** 2
        for a in range(len(nbrs)):
            for b in range(a + 1, len(nbrs)):
                x, y = nbrs[a], nbrs[b]
                if y not in adj[x]:
                    adj[x].add(y)
                    adj[y].add(x)
                    fill += 1
        eliminated[v] = True
    return CostReport(fill_in=fill, factor_nnz=g.n + g.n_edges + fill, flops=flops)


def elimination_tree(g: AdjacencyGraph, p: Permutation) -> EliminationTree:
    """Elimination tree of ``g`` in the numbering given by ``p``."""
    _check(g, p)
    h = g.relabel(p)
    parent = kernels.elimination_tree(h.n, h.indptr, h.indices)
    return EliminationTree(parent, kernels.postorder(h.n, parent))


def column_counts(g: AdjacencyGraph, p: Permutation) -> np.ndarray:
    """Nonzeros per column of the Cholesky factor of the permuted pattern."""
    _check(g, p)
    h = g.relabel(p)
    parent = kernels.elimination_tree(h.n, h.indptr, h.indices)
    return kernels.column_counts(h.n, h.indptr, h.indices, parent)


def etree_column_counts(g: AdjacencyGraph, p: Permutation) -> CostReport:
    counts = column_counts(g, p)
    factor_nnz = int(counts.sum())
    return CostReport(
        fill_in=factor_nnz - g.n - g.n_edges,
        factor_nnz=factor_nnz,
        flops=int(np.dot(counts, counts)),
    )


def proxy_costs(g: AdjacencyGraph, cfg: NDConfig | None = None) -> dict:
    """``{label: CostReport}`` for all four orderings of ``g``."""
    return {lab: etree_column_counts(g, ordering_for_graph(g, lab, cfg)) for lab in LABELS}


def _argmin(values: dict) -> OrderingLabel:
    best = min(values.values())
    return next(lab for lab in PRECEDENCE if values[lab] == best)


def proxy_label(m: SparseMatrixCSR, cfg: NDConfig | None = None) -> OrderingLabel:
    """Label with the smallest Cholesky flop estimate; ties AMD > HYBRID > ND > RCM."""
    costs = proxy_costs(symmetrize(m), cfg)
    return _argmin({lab: c.flops for lab, c in costs.items()})


@dataclass(frozen=True)
class TimingRecord:
    matrix_name: str
    seconds: dict

    def __post_init__(self):
        secs = {OrderingLabel.parse(k): float(v) for k, v in self.seconds.items()}
        missing = [lab.value for lab in LABELS if lab not in secs]
        if missing:
            raise IncompleteRecord(f"{self.matrix_name}: no time for {', '.join(missing)}")
        bad = [lab.value for lab, t in secs.items() if not t > 0]
        if bad:
            raise IncompleteRecord(f"{self.matrix_name}: non-positive time for {', '.join(bad)}")
        object.__setattr__(self, "seconds", secs)


def label_from_timings(rec: TimingRecord) -> OrderingLabel:
    return _argmin(rec.seconds)


def read_timings(source) -> dict:
    """Parse a ``matrix,rcm,amd,nd,scotch`` CSV into ``{name: TimingRecord}``.

    ``source`` is a path or a text stream.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, newline="") as fh:
            return read_timings(fh)
    reader = csv.DictReader(source)
    header = [h.strip().lower() for h in (reader.fieldnames or [])]
    if "matrix" not in header:
        raise ParseError("timing CSV needs a 'matrix' column")
    records = {}
    for lineno, row in enumerate(reader, start=2):
        row = {k.strip().lower(): (v or "").strip() for k, v in row.items() if k}
        secs = {}
        for col, lab in _TIMING_LABEL.items():
            if row.get(col):
                try:
                    secs[lab] = float(row[col])
                except ValueError:
                    raise ParseError(f"bad time {row[col]!r} in column {col}", lineno) from None
        records[row["matrix"]] = TimingRecord(row["matrix"], secs)
    return records


def write_timings(records, stream=None) -> str:
    out = stream or io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(TIMING_COLUMNS)
    for rec in records:
        s = rec.seconds
        w.writerow([rec.matrix_name] + [repr(s[_TIMING_LABEL[c]]) for c in TIMING_COLUMNS[1:]])
    return out.getvalue() if stream is None else ""
