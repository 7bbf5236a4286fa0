import numpy as np
import pytest

from reorder_advisor.matrix import symmetrize
from reorder_advisor.synth import FAMILIES, banded, generate_corpus, grid2d, random_matrix


def test_corpus_deterministic_and_sized():
    a = generate_corpus(30, seed=5, n_min=50, n_max=400)
    b = generate_corpus(30, seed=5, n_min=50, n_max=400)
    assert [n for n, _ in a] == [n for n, _ in b]
    for (_, x), (_, y) in zip(a, b):
        assert np.array_equal(x.row_ptr, y.row_ptr) and np.array_equal(x.col_idx, y.col_idx)
        assert np.array_equal(x.values, y.values)
    assert all(50 <= m.n_rows <= 400 and m.n_rows == m.n_cols for _, m in a)
    assert len({n for n, _ in a}) == 30


def test_seed_changes_corpus():
    a = generate_corpus(5, seed=1, n_max=300)
    b = generate_corpus(5, seed=2, n_max=300)
    assert any(x.n_rows != y.n_rows for (_, x), (_, y) in zip(a, b))


def test_weights_select_families():
    corpus = generate_corpus(6, seed=0, n_max=300, weights={"tree": 1})
    assert all(name.startswith("tree_") for name, _ in corpus)
    with pytest.raises(ValueError):
        generate_corpus(1, weights={"banded": 0})


@pytest.mark.parametrize("family", FAMILIES)
def test_families_have_full_diagonal(family, rng):
    m = random_matrix(family, 120, rng)
    diag = [m.col_idx[m.row_ptr[i] : m.row_ptr[i + 1]] for i in range(m.n_rows)]
    assert all(i in d for i, d in enumerate(diag))


def test_banded_shape(rng):
    m = banded(100, 4, 0.5, rng)
    i = np.repeat(np.arange(100), np.diff(m.row_ptr))
    assert np.abs(i - m.col_idx).max() <= 4
    g = symmetrize(m)
    assert all(k + 1 in g.neighbors(k) for k in range(99))  # first off-diagonal always present


def test_grid2d_degrees(rng):
    g = symmetrize(grid2d(5, 4, rng))
    assert g.n == 20 and sorted(set(g.degrees().tolist())) == [2, 3, 4]
    g9 = symmetrize(grid2d(5, 4, rng, nine_point=True))
    assert g9.degrees().max() == 8
