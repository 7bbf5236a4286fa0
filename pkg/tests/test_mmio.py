import io
import os
import tarfile
import threading

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fixture_path
from oracles import random_pattern
from reorder_advisor import mmio
from reorder_advisor.errors import (
    ConfigError,
    CorruptArchive,
    FetchError,
    ParseError,
    UnsupportedField,
    UnsupportedFormat,
)
from reorder_advisor.matrix import SparseMatrixCSR
from reorder_advisor.mmio import (
    fetch_collection_matrix,
    parse_matrix_market,
    read_matrix_market,
    write_matrix_market,
)

HEAD = "%%MatrixMarket matrix coordinate {} {}\n"


class TestParse:
    def test_diagonal_general(self):
        m = parse_matrix_market(HEAD.format("real", "general") + "2 2 2\n1 1 5.0\n2 2 7.0")
        assert m.shape == (2, 2) and m.nnz == 2
        assert m.values.tolist() == [5.0, 7.0]
        assert m.col_idx.tolist() == [0, 1]

    def test_symmetric_expansion(self):
        m = read_matrix_market(fixture_path("tridiag3.mtx"))
        assert m.nnz == 7
        assert np.array_equal(m.to_dense(), m.to_dense().T)

    def test_skew_symmetric_negates_mirror(self):
        m = parse_matrix_market(HEAD.format("real", "skew-symmetric") + "2 2 1\n2 1 3.0\n")
        assert m.to_dense().tolist() == [[0.0, -3.0], [3.0, 0.0]]

    def test_skew_symmetric_diagonal_rejected(self):
        with pytest.raises(ParseError):
            parse_matrix_market(HEAD.format("real", "skew-symmetric") + "2 2 1\n1 1 3.0\n")

    def test_pattern_values_are_one(self):
        m = parse_matrix_market(HEAD.format("pattern", "general") + "3 3 1\n3 1\n")
        assert m.to_dense()[2, 0] == 1.0 and m.nnz == 1

    def test_integer_field(self):
        m = parse_matrix_market(HEAD.format("integer", "general") + "1 1 1\n1 1 -4\n")
        assert m.values.tolist() == [-4.0]

    def test_duplicates_summed(self):
        m = parse_matrix_market(HEAD.format("real", "general") + "2 2 3\n1 2 1.5\n1 2 2.5\n2 1 1\n")
        assert m.nnz == 2 and m.to_dense()[0, 1] == 4.0

    def test_comments_blank_lines_and_case(self):
        text = "%%matrixmarket MATRIX Coordinate REAL General\n% comment\n\n2 2 1\n% inside\n2 2 1.0\n"
        assert parse_matrix_market(text.encode()).nnz == 1

    def test_stream_input(self):
        with open(fixture_path("diag4.mtx"), "rb") as fh:
            assert parse_matrix_market(fh).nnz == 4

    def test_rectangular_general(self):
        m = parse_matrix_market(HEAD.format("real", "general") + "2 3 1\n2 3 1.0\n")
        assert m.shape == (2, 3)

    @pytest.mark.parametrize("field, sym", [("complex", "general"), ("real", "hermitian")])
    def test_complex_rejected(self, field, sym):
        with pytest.raises(UnsupportedField):
            parse_matrix_market(HEAD.format(field, sym) + "1 1 1\n1 1 1 0\n")

    def test_array_rejected(self):
        with pytest.raises(UnsupportedFormat):
            parse_matrix_market("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n")

    @pytest.mark.parametrize(
        "body, line",
        [
            ("2 2 2\n1 1 5.0\n2 x 7.0\n", 4),
            ("2 2 2\n1 1 5.0\n3 1 7.0\n", 4),
            ("2 2 2\n1 1 5.0\n2 2\n", 4),
            ("2 2 2\n0 1 5.0\n2 2 1.0\n", 3),
            ("2 2\n", 2),
        ],
    )
    def test_malformed_line_number(self, body, line):
        with pytest.raises(ParseError) as exc:
            parse_matrix_market(HEAD.format("real", "general") + body)
        assert exc.value.line == line
        assert f"line {line}" in str(exc.value)

    def test_entry_count_mismatch(self):
        with pytest.raises(ParseError, match="announces 3"):
            parse_matrix_market(HEAD.format("real", "general") + "2 2 3\n1 1 1\n")

    def test_missing_banner(self):
        with pytest.raises(ParseError):
            parse_matrix_market("2 2 1\n1 1 1\n")

    def test_corrupt_fixture(self):
        with pytest.raises(ParseError):
            read_matrix_market(fixture_path("corrupt.mtx"))


class TestWrite:
    def test_identity(self):
        text = write_matrix_market(SparseMatrixCSR.identity(2)).decode()
        assert text.splitlines()[1] == "2 2 2"

    def test_empty(self):
        text = write_matrix_market(SparseMatrixCSR.from_coo(3, 3, [], [])).decode()
        assert text.splitlines() == ["%%MatrixMarket matrix coordinate real general", "3 3 0"]

    def test_round_trip_random(self, rng):
        for _ in range(100):
            r, c = (int(x) for x in rng.integers(1, 20, 2))
            m = random_pattern(rng, r, c, rng.uniform(0, 0.5))
            m = SparseMatrixCSR(m.n_rows, m.n_cols, m.row_ptr, m.col_idx, rng.normal(size=m.nnz) * 1e3)
            assert parse_matrix_market(write_matrix_market(m)) == m

    def test_stream_target(self):
        buf = io.BytesIO()
        data = write_matrix_market(SparseMatrixCSR.identity(3), buf)
        assert buf.getvalue() == data


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=1, max_size=6))
def test_values_round_trip_exactly(values):
    n = len(values)
    m = SparseMatrixCSR.from_coo(n, n, np.arange(n), np.arange(n)[::-1], values)
    assert parse_matrix_market(write_matrix_market(m)) == m


# --------------------------------------------------------------------------
# fetcher, exercised against file:// URLs
# --------------------------------------------------------------------------


def make_archive(root, group, name, member=None, payload=None):
    member = member or f"{name}/{name}.mtx"
    payload = payload if payload is not None else write_matrix_market(SparseMatrixCSR.identity(3))
    os.makedirs(os.path.join(root, group), exist_ok=True)
    path = os.path.join(root, group, f"{name}.tar.gz")
    with tarfile.open(path, "w:gz") as tar:
        info = tarfile.TarInfo(member)
        info.size = len(payload)
        tar.addfile(info, io.BytesIO(payload))
    return path


@pytest.fixture
def mirror(tmp_path):
    root = tmp_path / "mirror"
    root.mkdir()
    return str(root), "file://" + str(root)


def test_fetch_and_cache_hit(mirror, tmp_path, monkeypatch):
    root, url = mirror
    make_archive(root, "HB", "bcsstk01")
    cache = str(tmp_path / "cache")
    path = fetch_collection_matrix("HB", "bcsstk01", cache, base_url=url)
    assert path == os.path.join(cache, "HB", "bcsstk01.mtx")
    assert read_matrix_market(path).nnz == 3

    def no_network(*a, **k):
        raise AssertionError("network used on a cache hit")

    monkeypatch.setattr(mmio.urllib.request, "urlopen", no_network)
    assert fetch_collection_matrix("HB", "bcsstk01", cache, base_url=url) == path


def test_fetch_unknown_matrix_names_url(mirror, tmp_path):
    _, url = mirror
    with pytest.raises(FetchError) as exc:
        fetch_collection_matrix("HB", "no_such_matrix", str(tmp_path / "c"), base_url=url)
    assert exc.value.url == f"{url}/HB/no_such_matrix.tar.gz"
    assert "no_such_matrix.tar.gz" in str(exc.value)


def test_fetch_archive_without_mtx(mirror, tmp_path):
    root, url = mirror
    make_archive(root, "G", "m", member="m/README.txt", payload=b"hi")
    with pytest.raises(CorruptArchive):
        fetch_collection_matrix("G", "m", str(tmp_path / "c"), base_url=url)
    assert not os.path.exists(str(tmp_path / "c" / "G" / "m.mtx"))


def test_fetch_garbage_archive(mirror, tmp_path):
    root, url = mirror
    os.makedirs(os.path.join(root, "G"))
    with open(os.path.join(root, "G", "m.tar.gz"), "wb") as fh:
        fh.write(b"not a tarball")
    with pytest.raises(CorruptArchive):
        fetch_collection_matrix("G", "m", str(tmp_path / "c"), base_url=url)


def test_fetch_env_cache(mirror, tmp_path, monkeypatch):
    root, url = mirror
    make_archive(root, "HB", "x")
    monkeypatch.setenv("REORDER_ADVISOR_CACHE", str(tmp_path / "envcache"))
    path = fetch_collection_matrix("HB", "x", base_url=url)
    assert path.startswith(str(tmp_path / "envcache"))


def test_fetch_rejects_path_components(tmp_path):
    with pytest.raises(ConfigError):
        fetch_collection_matrix("..", "x", str(tmp_path))
    with pytest.raises(ConfigError):
        fetch_collection_matrix("HB", "a/b", str(tmp_path))


def test_concurrent_fetches(mirror, tmp_path):
    root, url = mirror
    make_archive(root, "HB", "y")
    cache = str(tmp_path / "c")
    results, errors = [], []

    def worker():
        try:
            results.append(fetch_collection_matrix("HB", "y", cache, base_url=url))
        except Exception as exc:  # pragma: no cover - reported below
            errors.append(exc)

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors and len(set(results)) == 1
    assert read_matrix_market(results[0]).nnz == 3
    assert [f for f in os.listdir(os.path.join(cache, "HB")) if f.endswith(".part")] == []


@pytest.mark.network
@pytest.mark.skipif(not os.environ.get("REORDER_ADVISOR_NETWORK_TESTS"), reason="set REORDER_ADVISOR_NETWORK_TESTS=1")
def test_fetch_asic_320k(tmp_path):
    path = fetch_collection_matrix("Sandia", "ASIC_320k", str(tmp_path))
    m = read_matrix_market(path)
    assert m.n_rows == 321821
    assert m.nnz == 2635364
