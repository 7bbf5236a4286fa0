"""Fill- and bandwidth-reducing orderings, one per algorithm category.

=========  ====================  ==========================================
label      category              algorithm
=========  ====================  ==========================================
RCM        bandwidth reduction   reverse Cuthill-McKee
AMD        fill-in reduction     minimum degree, approximate external degree
ND         graph based           level-structure nested dissection
HYBRID     hybrid                nested dissection, minimum-degree leaves
=========  ====================  ==========================================

Every function returns a :class:`~reorder_advisor.matrix.Permutation`
(``perm[old] = new``).  Ties are always broken toward the lower vertex index,
so results are deterministic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .matrix import AdjacencyGraph, Permutation, SparseMatrixCSR, symmetrize

#: cap on BFS sweeps in the pseudo-peripheral vertex search
MAX_SWEEPS = 10


class OrderingLabel(str, enum.Enum):
    RCM = "RCM"
    AMD = "AMD"
    ND = "ND"
    HYBRID = "HYBRID"

    @classmethod
    def parse(cls, text) -> OrderingLabel:
        """Accept label names case-insensitively; ``SCOTCH`` maps to HYBRID."""
        if isinstance(text, cls):
            return text
        key = str(text).strip().upper()
        if key == "SCOTCH":
            return cls.HYBRID
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown ordering label {text!r}") from None

    def __str__(self):
        return self.value


LABELS = tuple(OrderingLabel)


class LeafOrdering(str, enum.Enum):
    NATURAL = "natural"
    MINIMUM_DEGREE = "minimum_degree"


@dataclass(frozen=True)
class NDConfig:
    leaf_threshold: int = 32
    leaf_ordering: LeafOrdering = LeafOrdering.NATURAL

    def __post_init__(self):
        if self.leaf_threshold < 2:
            raise ValueError("leaf_threshold must be >= 2")
        object.__setattr__(self, "leaf_ordering", LeafOrdering(self.leaf_ordering))


@dataclass(frozen=True)
class DissectionStep:
    """One separator split: vertices (original ids) of both parts and the separator."""

    part_a: np.ndarray
    part_b: np.ndarray
    separator: np.ndarray


def rcm_ordering(g: AdjacencyGraph) -> Permutation:
    if g.n == 0:
        return Permutation.identity(0)
    order = kernels.reverse_cuthill_mckee(g.n, g.indptr, g.indices, MAX_SWEEPS)
    return Permutation.from_order(order)


def minimum_degree_ordering(g: AdjacencyGraph) -> Permutation:
    if g.n == 0:
        return Permutation.identity(0)
    return Permutation.from_order(kernels.minimum_degree(g.n, g.indptr, g.indices))


def _leaf_order(g, verts, how):
    if how is LeafOrdering.NATURAL or verts.size <= 1:
        return verts
    sub = g.subgraph(verts)
    return verts[kernels.minimum_degree(sub.n, sub.indptr, sub.indices)]


def _split(sub):
    """Median-level separator of a connected graph, or ``None`` if it has < 3 levels."""
    start = int(np.argmin(sub.degrees()))
    _, order, level_ptr = kernels.pseudo_peripheral_levels(
        sub.n, sub.indptr, sub.indices, start, MAX_SWEEPS
    )
    nlev = level_ptr.size - 1
    if nlev < 3:
        return None
    # first level whose cumulative size reaches half the component
    m = int(np.searchsorted(2 * level_ptr[1:], sub.n))
    m = min(max(m, 1), nlev - 2)
    a = np.sort(order[: level_ptr[m]])
    s = np.sort(order[level_ptr[m] : level_ptr[m + 1]])
    b = np.sort(order[level_ptr[m + 1] :])
    return a, s, b


def nested_dissection_ordering(
    g: AdjacencyGraph, cfg: NDConfig | None = None, trace: list | None = None
) -> Permutation:
    """Nested dissection numbering: part A, then part B, then the separator.

    Subgraphs of at most ``cfg.leaf_threshold`` vertices are ordered by
    ``cfg.leaf_ordering``.  Larger ones are split into connected
    components (numbered by lowest vertex) and each component is cut at the
    median level of a BFS level structure rooted at a pseudo-peripheral
    vertex.  When ``trace`` is a list, one :class:`DissectionStep` per cut is
    appended to it.
    """
    cfg = cfg or NDConfig()
    n = g.n
    order = np.empty(n, dtype=np.int64)
    # work items: (sorted original vertex ids, first new number)
    stack = [(np.arange(n, dtype=np.int64), 0)]
    while stack:
        verts, lo = stack.pop()
        size = verts.size
        if size == 0:
            continue
        if size <= cfg.leaf_threshold:
            order[lo : lo + size] = _leaf_order(g, verts, cfg.leaf_ordering)
            continue
        sub = g if size == n else g.subgraph(verts)
        label = kernels.connected_components(sub.n, sub.indptr, sub.indices)
        ncomp = int(label.max()) + 1
        if ncomp > 1:
            offset = lo
            for c in range(ncomp):
                part = verts[label == c]
                stack.append((part, offset))
                offset += part.size
            continue
        cut = _split(sub)
        if cut is None:
            order[lo : lo + size] = _leaf_order(g, verts, cfg.leaf_ordering)
            continue
        a, s, b = (verts[x] for x in cut)
        if trace is not None:
            trace.append(DissectionStep(a, b, s))
        stack.append((a, lo))
        stack.append((b, lo + a.size))
        order[lo + a.size + b.size : lo + size] = s
    return Permutation.from_order(order)


def hybrid_ordering(g: AdjacencyGraph, cfg: NDConfig | None = None) -> Permutation:
    threshold = (cfg or NDConfig()).leaf_threshold
    return nested_dissection_ordering(g, NDConfig(threshold, LeafOrdering.MINIMUM_DEGREE))


def ordering_for_graph(g: AdjacencyGraph, label, cfg: NDConfig | None = None) -> Permutation:
    label = OrderingLabel.parse(label)
    if label is OrderingLabel.RCM:
        return rcm_ordering(g)
    if label is OrderingLabel.AMD:
        return minimum_degree_ordering(g)
    if label is OrderingLabel.ND:
        threshold = (cfg or NDConfig()).leaf_threshold
        return nested_dissection_ordering(g, NDConfig(threshold, LeafOrdering.NATURAL))
    return hybrid_ordering(g, cfg)


def order_by_label(m: SparseMatrixCSR, label, cfg: NDConfig | None = None) -> Permutation:
    """Symmetrize ``m`` and run the ordering named by ``label``."""
    return ordering_for_graph(symmetrize(m), label, cfg)
