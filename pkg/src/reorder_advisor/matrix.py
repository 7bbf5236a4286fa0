"""Sparse matrix, permutation and adjacency-graph types.

Everything is 0-based.  Permutations use the ``perm[old] = new`` convention
throughout the package; :meth:`Permutation.order` gives the other view
(``order[new] = old``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

INDEX = np.int64


def _frozen(a, dtype):
    a = np.array(a, dtype=dtype, copy=True)
    a.flags.writeable = False
    return a


def _csr_from_coo(n_rows, rows, cols, values=None, sum_duplicates=True):
    """Sort COO triplets into CSR arrays; duplicates summed (or dropped)."""
    rows = np.asarray(rows, dtype=INDEX)
    cols = np.asarray(cols, dtype=INDEX)
    key = np.lexsort((cols, rows))
    rows, cols = rows[key], cols[key]
    if values is not None:
        values = np.asarray(values, dtype=np.float64)[key]
    if rows.size:
        first = np.ones(rows.size, dtype=bool)
        first[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        if not first.all():
            if values is not None and sum_duplicates:
                values = np.add.reduceat(values, np.flatnonzero(first))
            elif values is not None:
                values = values[first]
            rows, cols = rows[first], cols[first]
    row_ptr = np.zeros(n_rows + 1, dtype=INDEX)
    np.cumsum(np.bincount(rows, minlength=n_rows), out=row_ptr[1:])
    return row_ptr, cols, values


@dataclass(frozen=True, eq=False)
class SparseMatrixCSR:
    """Real sparse matrix in compressed sparse row form.

    Explicitly stored zeros are part of the pattern and count toward ``nnz``.
    """

    n_rows: int
    n_cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n_rows", int(self.n_rows))
        object.__setattr__(self, "n_cols", int(self.n_cols))
        object.__setattr__(self, "row_ptr", _frozen(self.row_ptr, INDEX))
        object.__setattr__(self, "col_idx", _frozen(self.col_idx, INDEX))
        object.__setattr__(self, "values", _frozen(self.values, np.float64))
        self._validate()

    def _validate(self):
        rp, ci = self.row_ptr, self.col_idx
        if self.n_rows < 0 or self.n_cols < 0:
            raise ValueError("negative matrix dimension")
        if rp.shape != (self.n_rows + 1,):
            raise ValueError("row_ptr must have length n_rows + 1")
        if rp[0] != 0 or rp[-1] != ci.size or np.any(np.diff(rp) < 0):
            raise ValueError("row_ptr must be non-decreasing from 0 to nnz")
        if self.values.shape != ci.shape:
            raise ValueError("values and col_idx lengths differ")
        if ci.size:
            if ci.min() < 0 or ci.max() >= self.n_cols:
                raise ValueError("column index out of range")
            # strictly increasing inside each row
            step = np.diff(ci)
            row_start = np.zeros(ci.size, dtype=bool)
            row_start[rp[:-1][rp[:-1] < ci.size]] = True
            if np.any((step <= 0) & ~row_start[1:]):
                raise ValueError("column indices must be strictly increasing within a row")

    # construction ---------------------------------------------------------

    @classmethod
    def from_coo(cls, n_rows, n_cols, rows, cols, values=None, sum_duplicates=True):
        rows = np.asarray(rows, dtype=INDEX)
        if values is None:
            values = np.ones(rows.size)
        row_ptr, col_idx, vals = _csr_from_coo(n_rows, rows, cols, values, sum_duplicates)
        return cls(n_rows, n_cols, row_ptr, col_idx, vals)

    @classmethod
    def from_dense(cls, a, keep_zeros=False):
        a = np.asarray(a, dtype=np.float64)
        mask = np.ones(a.shape, dtype=bool) if keep_zeros else a != 0
        rows, cols = np.nonzero(mask)
        return cls.from_coo(a.shape[0], a.shape[1], rows, cols, a[rows, cols])

    @classmethod
    def identity(cls, n):
        idx = np.arange(n)
        return cls.from_coo(n, n, idx, idx)

    # views ---------------------------------------------------------------

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self):
        return int(self.col_idx.size)

    @property
    def is_square(self):
        return self.n_rows == self.n_cols

    def row_indices(self):
        """Row index of every stored entry (COO row array)."""
        return np.repeat(np.arange(self.n_rows, dtype=INDEX), np.diff(self.row_ptr))

    def row_counts(self):
        return np.diff(self.row_ptr)

    def to_dense(self):
        out = np.zeros(self.shape)
        out[self.row_indices(), self.col_idx] = self.values
        return out

    def pattern(self):
        """Set of stored ``(i, j)`` positions."""
        return set(zip(self.row_indices().tolist(), self.col_idx.tolist()))

    def __eq__(self, other):
        if not isinstance(other, SparseMatrixCSR):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrixCSR(shape={self.shape}, nnz={self.nnz})"


@dataclass(frozen=True, eq=False)
class Permutation:
    """Bijection on ``0..size-1`` stored as ``perm[old] = new``."""

    perm: np.ndarray

    def __post_init__(self):
        p = _frozen(self.perm, INDEX)
        if p.ndim != 1:
            raise ValueError("permutation must be one-dimensional")
        seen = np.zeros(p.size, dtype=bool)
        if p.size and (p.min() < 0 or p.max() >= p.size):
            raise ValueError("permutation entry out of range")
        seen[p] = True
        if not seen.all():
            raise ValueError("permutation is not a bijection")
        object.__setattr__(self, "perm", p)

    @classmethod
    def identity(cls, n):
        return cls(np.arange(n))

    @classmethod
    def from_order(cls, order):
        """Build from an elimination/visit order (``order[new] = old``)."""
        order = np.asarray(order, dtype=INDEX)
        perm = np.empty_like(order)
        perm[order] = np.arange(order.size, dtype=INDEX)
        return cls(perm)

    @property
    def size(self):
        return int(self.perm.size)

    def order(self):
        """``order[new] = old``."""
        return invert_permutation(self).perm

    def inverse(self):
        return invert_permutation(self)

    def compose(self, other):
        """Apply ``self`` then ``other``: result[i] = other[self[i]]."""
        return Permutation(other.perm[self.perm])

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self.perm, other.perm)

    __hash__ = None

    def __repr__(self):
        if self.size <= 12:
            return f"Permutation({self.perm.tolist()})"
        return f"Permutation(size={self.size})"


@dataclass(frozen=True, eq=False)
class AdjacencyGraph:
    """Undirected simple graph in CSR form (sorted neighbor lists, no self-loops)."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "indptr", _frozen(self.indptr, INDEX))
        object.__setattr__(self, "indices", _frozen(self.indices, INDEX))
        if self.indptr.shape != (self.n + 1,) or self.indptr[-1] != self.indices.size:
            raise ValueError("malformed adjacency structure")

    @classmethod
    def from_edges(cls, n, edges):
        """Graph on ``n`` vertices from an iterable of ``(u, v)`` pairs."""
        e = np.asarray(list(edges), dtype=INDEX).reshape(-1, 2)
        e = e[e[:, 0] != e[:, 1]]
        rows = np.concatenate([e[:, 0], e[:, 1]])
        cols = np.concatenate([e[:, 1], e[:, 0]])
        indptr, indices, _ = _csr_from_coo(n, rows, cols)
        return cls(n, indptr, indices)

    @property
    def n_edges(self):
        return int(self.indices.size // 2)

    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, v):
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def edges(self):
        """Each undirected edge once, as ``(u, v)`` with ``u < v``."""
        rows = np.repeat(np.arange(self.n, dtype=INDEX), self.degrees())
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def relabel(self, p: Permutation) -> AdjacencyGraph:
        """Graph with vertex ``v`` renamed to ``p[v]``."""
        if p.size != self.n:
            raise DimensionMismatch(f"permutation of size {p.size} for graph of {self.n} vertices")
        rows = np.repeat(np.arange(self.n, dtype=INDEX), self.degrees())
        indptr, indices, _ = _csr_from_coo(self.n, p.perm[rows], p.perm[self.indices])
        return AdjacencyGraph(self.n, indptr, indices)

    def subgraph(self, vertices):
        """Induced subgraph on ``vertices`` (local vertex k is ``vertices[k]``)."""
        vertices = np.asarray(vertices, dtype=INDEX)
        local = np.full(self.n, -1, dtype=INDEX)
        local[vertices] = np.arange(vertices.size, dtype=INDEX)
        rows = local[np.repeat(np.arange(self.n, dtype=INDEX), self.degrees())]
        cols = local[self.indices]
        keep = (rows >= 0) & (cols >= 0)
        indptr, indices, _ = _csr_from_coo(vertices.size, rows[keep], cols[keep])
        return AdjacencyGraph(vertices.size, indptr, indices)

    def __eq__(self, other):
        if not isinstance(other, AdjacencyGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self):
        return f"AdjacencyGraph(n={self.n}, edges={self.n_edges})"


def _require_square(m):
    if not m.is_square:
        raise DimensionMismatch(f"expected a square matrix, got {m.n_rows}x{m.n_cols}")


def symmetrize(m: SparseMatrixCSR) -> AdjacencyGraph:
    """Adjacency graph of the pattern of ``A + A^T`` with the diagonal dropped."""
    _require_square(m)
    rows = m.row_indices()
    cols = m.col_idx
    off = rows != cols
    r = np.concatenate([rows[off], cols[off]])
    c = np.concatenate([cols[off], rows[off]])
    indptr, indices, _ = _csr_from_coo(m.n_rows, r, c)
    return AdjacencyGraph(m.n_rows, indptr, indices)


def apply_permutation(m: SparseMatrixCSR, p: Permutation) -> SparseMatrixCSR:
    """Symmetric permutation ``P A P^T``: entry ``(i, j)`` moves to ``(p[i], p[j])``."""
    _require_square(m)
    if p.size != m.n_rows:
        raise DimensionMismatch(f"permutation of size {p.size} for {m.n_rows}x{m.n_cols} matrix")
    rows = p.perm[m.row_indices()]
    cols = p.perm[m.col_idx]
    return SparseMatrixCSR.from_coo(m.n_rows, m.n_cols, rows, cols, m.values)


def invert_permutation(p: Permutation) -> Permutation:
    inv = np.empty_like(p.perm)
    inv[p.perm] = np.arange(p.size, dtype=INDEX)
    return Permutation(inv)
