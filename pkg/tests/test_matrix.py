import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_pattern, random_pattern, tridiagonal
from reorder_advisor import DimensionMismatch
from reorder_advisor.matrix import (
    AdjacencyGraph,
    Permutation,
    SparseMatrixCSR,
    apply_permutation,
    invert_permutation,
    symmetrize,
)


def edge_set(g):
    return {tuple(e) for e in g.edges().tolist()}


class TestSparseMatrixCSR:
    def test_from_coo_sorts_and_sums_duplicates(self):
        m = SparseMatrixCSR.from_coo(2, 3, [1, 0, 1, 0], [2, 1, 2, 0], [1.0, 2.0, 3.0, 4.0])
        assert m.row_ptr.tolist() == [0, 2, 3]
        assert m.col_idx.tolist() == [0, 1, 2]
        assert m.values.tolist() == [4.0, 2.0, 4.0]

    def test_explicit_zeros_count(self):
        m = SparseMatrixCSR.from_coo(2, 2, [0, 1], [0, 1], [0.0, 1.0])
        assert m.nnz == 2

    @pytest.mark.parametrize(
        "row_ptr, col_idx",
        [
            ([0, 2, 1], [0, 1]),  # decreasing offsets
            ([1, 2, 2], [0, 1]),  # does not start at 0
            ([0, 2, 2], [1, 0]),  # unsorted row
            ([0, 2, 2], [1, 1]),  # duplicate column
            ([0, 1, 2], [0, 5]),  # column out of range
        ],
    )
    def test_invalid_structure_rejected(self, row_ptr, col_idx):
        with pytest.raises(ValueError):
            SparseMatrixCSR(2, 2, np.array(row_ptr), np.array(col_idx), np.ones(len(col_idx)))

    def test_immutable(self):
        m = tridiagonal(3)
        with pytest.raises(ValueError):
            m.values[0] = 5.0

    def test_constructor_copies_input(self):
        vals = np.ones(2)
        m = SparseMatrixCSR(2, 2, np.array([0, 1, 2]), np.array([0, 1]), vals)
        vals[0] = 9.0
        assert m.values[0] == 1.0
        assert vals.flags.writeable

    def test_dense_round_trip(self, rng):
        a = np.where(rng.random((5, 7)) < 0.4, rng.normal(size=(5, 7)), 0.0)
        assert np.array_equal(SparseMatrixCSR.from_dense(a).to_dense(), a)


class TestPermutation:
    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation([0, 0, 1])
        with pytest.raises(ValueError):
            Permutation([0, 3, 1])

    @pytest.mark.parametrize(
        "p, inv", [([0, 1, 2], [0, 1, 2]), ([2, 0, 1], [1, 2, 0]), ([1, 0], [1, 0])]
    )
    def test_invert_examples(self, p, inv):
        assert invert_permutation(Permutation(p)).perm.tolist() == inv

    def test_invert_is_involution(self, rng):
        for _ in range(20):
            p = Permutation(rng.permutation(9))
            assert invert_permutation(invert_permutation(p)) == p
            assert np.array_equal(invert_permutation(p).perm[p.perm], np.arange(9))

    def test_from_order(self):
        p = Permutation.from_order([2, 0, 1])  # new 0 is old 2
        assert p.perm.tolist() == [1, 2, 0]
        assert p.order().tolist() == [2, 0, 1]

    def test_compose(self):
        a, b = Permutation([1, 2, 0]), Permutation([2, 1, 0])
        assert a.compose(b).perm.tolist() == [1, 0, 2]


class TestSymmetrize:
    def test_tridiagonal_is_path(self):
        assert edge_set(symmetrize(tridiagonal(3))) == {(0, 1), (1, 2)}

    def test_upper_triangle_closure(self):
        m = SparseMatrixCSR.from_coo(3, 3, [0, 0], [1, 2])
        g = symmetrize(m)
        assert edge_set(g) == {(0, 1), (0, 2)}
        assert g.neighbors(1).tolist() == [0]

    def test_identity_has_no_edges(self):
        assert symmetrize(SparseMatrixCSR.identity(4)).n_edges == 0

    def test_non_square(self):
        with pytest.raises(DimensionMismatch):
            symmetrize(SparseMatrixCSR.from_coo(2, 3, [0], [2]))

    def test_invariants_on_random_patterns(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 25))
            m = random_pattern(rng, n, n, rng.uniform(0.0, 0.4))
            g = symmetrize(m)
            a = dense_pattern(m)
            expected = (a | a.T) & ~np.eye(n, dtype=bool)
            got = np.zeros((n, n), dtype=bool)
            for v in range(n):
                nb = g.neighbors(v)
                assert np.all(np.diff(nb) > 0)
                got[v, nb] = True
            assert np.array_equal(got, expected)


class TestApplyPermutation:
    def test_identity(self, rng):
        m = random_pattern(rng, 6, 6, 0.3)
        assert apply_permutation(m, Permutation.identity(6)) == m

    def test_reversal_of_tridiagonal(self):
        pm = apply_permutation(tridiagonal(3), Permutation([2, 1, 0]))
        assert pm == tridiagonal(3)

    def test_two_by_two(self):
        m = SparseMatrixCSR.from_coo(2, 2, [0], [1])
        pm = apply_permutation(m, Permutation([1, 0]))
        assert list(zip(pm.row_indices().tolist(), pm.col_idx.tolist())) == [(1, 0)]

    def test_entries_move(self, rng):
        m = random_pattern(rng, 7, 7, 0.4)
        p = Permutation(rng.permutation(7))
        a, b = m.to_dense(), apply_permutation(m, p).to_dense()
        for i in range(7):
            for j in range(7):
                assert b[p.perm[i], p.perm[j]] == a[i, j]

    def test_size_mismatch(self):
        with pytest.raises(DimensionMismatch):
            apply_permutation(tridiagonal(3), Permutation.identity(4))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 30), st.floats(0.0, 0.5), st.integers(0, 2**32 - 1))
def test_permutation_round_trip_property(n, density, seed):
    rng = np.random.default_rng(seed)
    m = random_pattern(rng, n, n, density)
    p = Permutation(rng.permutation(n))
    pm = apply_permutation(m, p)
    assert pm.nnz == m.nnz
    assert sorted(pm.values.tolist()) == sorted(m.values.tolist())
    assert apply_permutation(pm, invert_permutation(p)) == m


def test_graph_relabel_and_subgraph():
    g = AdjacencyGraph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    h = g.relabel(Permutation([3, 2, 1, 0]))
    assert edge_set(h) == {(2, 3), (1, 2), (0, 1)}
    s = g.subgraph([1, 2, 3])
    assert s.n == 3 and edge_set(s) == {(0, 1), (1, 2)}
