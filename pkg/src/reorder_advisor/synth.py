"""Synthetic sparse-matrix families for building desk-scale training corpora."""

from __future__ import annotations

import numpy as np

from .matrix import Permutation, SparseMatrixCSR, apply_permutation

FAMILIES = ("banded", "grid2d", "grid3d", "random", "tree", "block", "arrow")

#: relative frequency of each family in :func:`generate_corpus`; weighted
#: toward banded and grid matrices, where RCM, AMD and HYBRID compete
DEFAULT_WEIGHTS = {"banded": 4, "grid2d": 4, "grid3d": 2, "random": 1, "tree": 1, "block": 1, "arrow": 1}


def _with_diagonal(n, rows, cols, rng, symmetric=True):
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if symmetric:
        rows, cols = np.concatenate([rows, cols]), np.concatenate([cols, rows])
    d = np.arange(n)
    r = np.concatenate([rows, d])
    c = np.concatenate([cols, d])
    vals = rng.uniform(-1.0, 1.0, r.size)
    vals[-n:] = n  # diagonal dominance keeps the toy systems well posed
    return SparseMatrixCSR.from_coo(n, n, r, c, vals, sum_duplicates=False)


def banded(n, half_bandwidth, density, rng):
    """Random entries inside a band; the first off-diagonal is always present."""
    offs = np.arange(1, half_bandwidth + 1)
    i = np.repeat(np.arange(n), offs.size)
    j = i + np.tile(offs, n)
    keep = (j < n) & ((j == i + 1) | (rng.random(i.size) < density))
    return _with_diagonal(n, i[keep], j[keep], rng)


def grid2d(nx, ny, rng, nine_point=False):
    idx = np.arange(nx * ny).reshape(nx, ny)
    pairs = [(idx[:, :-1], idx[:, 1:]), (idx[:-1, :], idx[1:, :])]
    if nine_point:
        pairs += [(idx[:-1, :-1], idx[1:, 1:]), (idx[:-1, 1:], idx[1:, :-1])]
    r = np.concatenate([a.ravel() for a, _ in pairs])
    c = np.concatenate([b.ravel() for _, b in pairs])
    return _with_diagonal(nx * ny, r, c, rng)


def grid3d(nx, ny, nz, rng):
    idx = np.arange(nx * ny * nz).reshape(nx, ny, nz)
    pairs = [
        (idx[:-1, :, :], idx[1:, :, :]),
        (idx[:, :-1, :], idx[:, 1:, :]),
        (idx[:, :, :-1], idx[:, :, 1:]),
    ]
    r = np.concatenate([a.ravel() for a, _ in pairs])
    c = np.concatenate([b.ravel() for _, b in pairs])
    return _with_diagonal(nx * ny * nz, r, c, rng)


def random_sparse(n, avg_degree, rng, symmetric=True):
    m = int(round(n * avg_degree / 2))
    r = rng.integers(0, n, m)
    c = rng.integers(0, n, m)
    keep = r != c
    return _with_diagonal(n, r[keep], c[keep], rng, symmetric=symmetric)


def tree_like(n, extra_edges, rng):
    """Random recursive tree plus a few chords."""
    child = np.arange(1, n)
    parent = (rng.random(n - 1) * child).astype(np.int64)
    r = rng.integers(0, n, extra_edges)
    c = rng.integers(0, n, extra_edges)
    keep = r != c
    return _with_diagonal(n, np.concatenate([child, r[keep]]), np.concatenate([parent, c[keep]]), rng)


def block_structured(n, block_size, inner_density, coupling, rng):
    """Dense-ish diagonal blocks joined by sparse random coupling entries."""
    rows, cols = [], []
    for start in range(0, n, block_size):
        b = min(block_size, n - start)
        i, j = np.triu_indices(b, 1)
        keep = rng.random(i.size) < inner_density
        rows.append(i[keep] + start)
        cols.append(j[keep] + start)
        if start + b < n:  # chain consecutive blocks
            rows.append(np.array([start + b - 1]))
            cols.append(np.array([start + b]))
    m = int(coupling * n)
    rows.append(rng.integers(0, n, m))
    cols.append(rng.integers(0, n, m))
    r, c = np.concatenate(rows), np.concatenate(cols)
    keep = r != c
    return _with_diagonal(n, r[keep], c[keep], rng)


def arrow(n, n_dense, base_half_bandwidth, rng):
    """Banded matrix with ``n_dense`` full trailing rows/columns."""
    base = banded(n - n_dense, base_half_bandwidth, 0.7, rng)
    k = base.n_rows
    ri = base.row_indices()
    keep = ri < base.col_idx
    r = [ri[keep]]
    c = [base.col_idx[keep]]
    for d in range(n_dense):
        hub = k + d
        members = np.flatnonzero(rng.random(hub) < 0.5)
        r.append(members)
        c.append(np.full(members.size, hub))
    return _with_diagonal(n, np.concatenate(r), np.concatenate(c), rng)


def random_matrix(family, n, rng):
    """One matrix of roughly ``n`` rows from ``family`` with random parameters."""
    if family == "banded":
        return banded(n, int(rng.integers(1, 17)), float(rng.uniform(0.2, 0.8)), rng)
    if family == "grid2d":
        if rng.random() < 0.6:  # thin strip
            nx = int(rng.integers(3, 13))
        else:
            nx = max(3, int(np.sqrt(n) * rng.uniform(0.6, 1.0)))
        ny = max(3, n // nx)
        return grid2d(nx, ny, rng, nine_point=bool(rng.random() < 0.6))
    if family == "grid3d":
        dims = np.maximum(3, np.round(n ** (1 / 3) * rng.uniform(0.7, 1.4, 2))).astype(int)
        return grid3d(int(dims[0]), int(dims[1]), max(3, n // int(dims[0] * dims[1])), rng)
    if family == "random":
        return random_sparse(n, float(rng.uniform(1.5, 6.0)), rng, symmetric=bool(rng.random() < 0.7))
    if family == "tree":
        return tree_like(n, int(rng.integers(0, max(2, n // 20))), rng)
    if family == "block":
        return block_structured(
            n, int(rng.integers(4, 40)), float(rng.uniform(0.3, 1.0)), float(rng.uniform(0.0, 0.3)), rng
        )
    if family == "arrow":
        return arrow(n, int(rng.integers(1, 6)), int(rng.integers(1, 4)), rng)
    raise ValueError(f"unknown family {family!r}")


def generate_corpus(count, seed=42, n_min=50, n_max=2000, weights=None, shuffle_prob=0.5):
    """``count`` named matrices drawn from the synthetic families.

    Families repeat in a fixed cycle following ``weights`` (default
    :data:`DEFAULT_WEIGHTS`).  Sizes are log-uniform in ``[n_min, n_max]``
    and generated matrices outside that range are redrawn.  With probability
    ``shuffle_prob`` a matrix is symmetrically permuted at random so that its
    stored ordering carries no structure.
    """
    weights = DEFAULT_WEIGHTS if weights is None else weights
    cycle = [f for f in FAMILIES for _ in range(int(weights.get(f, 0)))]
    if not cycle:
        raise ValueError("weights select no family")
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        family = cycle[k % len(cycle)]
        while True:
            n = int(np.exp(rng.uniform(np.log(n_min), np.log(n_max))))
            m = random_matrix(family, n, rng)
            if n_min <= m.n_rows <= n_max:
                break
        shuffled = bool(rng.random() < shuffle_prob)
        if shuffled:
            m = apply_permutation(m, Permutation(rng.permutation(m.n_rows)))
        out.append((f"{family}_{k:04d}{'_p' if shuffled else ''}", m))
    return out
