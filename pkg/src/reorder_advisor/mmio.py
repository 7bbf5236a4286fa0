"""Matrix Market coordinate files and the SuiteSparse collection fetcher.

Only the real-valued coordinate subset is supported: ``real``, ``integer``
and ``pattern`` fields with ``general``, ``symmetric`` or ``skew-symmetric``
storage.  Complex and hermitian files are rejected, as are dense ``array``
files.
"""

from __future__ import annotations

import io
import os
import re
import tarfile
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass

import numpy as np
from filelock import FileLock

from .errors import ConfigError, CorruptArchive, FetchError, ParseError, UnsupportedField, UnsupportedFormat
from .matrix import SparseMatrixCSR

BANNER = "%%matrixmarket"
DEFAULT_BASE_URL = "https://sparse.tamu.edu/MM"
CACHE_ENV = "REORDER_ADVISOR_CACHE"

_FIELDS = ("real", "integer", "pattern", "complex")
_SYMMETRIES = ("general", "symmetric", "skew-symmetric", "hermitian")


@dataclass(frozen=True)
class MatrixMarketHeader:
    object: str
    format: str
    field: str
    symmetry: str

    @classmethod
    def parse(cls, line: str) -> MatrixMarketHeader:
        tokens = line.split()
        if not tokens or tokens[0].lower() != BANNER:
            raise ParseError("missing %%MatrixMarket banner", 1)
        if len(tokens) != 5:
            raise ParseError(f"banner needs 4 qualifiers, got {len(tokens) - 1}", 1)
        obj, fmt, field, sym = (t.lower() for t in tokens[1:])
        if obj != "matrix":
            raise ParseError(f"unsupported object {obj!r}", 1)
        if fmt == "array":
            raise UnsupportedFormat("dense array format is not supported", 1)
        if fmt != "coordinate":
            raise ParseError(f"unknown format {fmt!r}", 1)
        if field not in _FIELDS:
            raise ParseError(f"unknown field {field!r}", 1)
        if sym not in _SYMMETRIES:
            raise ParseError(f"unknown symmetry {sym!r}", 1)
        if field == "complex" or sym == "hermitian":
            raise UnsupportedField(f"complex-valued matrices are not supported ({field} {sym})", 1)
        return cls(obj, fmt, field, sym)

    def banner(self) -> str:
        return f"%%MatrixMarket {self.object} {self.format} {self.field} {self.symmetry}"


def _text_of(source) -> bytes:
    if isinstance(source, bytes):
        return source
    if isinstance(source, str):
        return source.encode()
    data = source.read()
    return data.encode() if isinstance(data, str) else data


def _entries_slow(lines, first_lineno, ncol, n_rows, n_cols):
    """Line-by-line conversion, used to pinpoint the first bad line."""
    rows, cols, vals = [], [], []
    for k, raw in enumerate(lines):
        lineno = first_lineno[k]
        tok = raw.split()
        if len(tok) != ncol:
            raise ParseError(f"expected {ncol} fields, got {len(tok)}", lineno)
        try:
            i, j = int(tok[0]), int(tok[1])
            v = float(tok[2]) if ncol == 3 else 1.0
        except ValueError:
            raise ParseError(f"cannot parse entry {raw.decode(errors='replace').strip()!r}", lineno) from None
        if not (1 <= i <= n_rows and 1 <= j <= n_cols):
            raise ParseError(f"index ({i}, {j}) outside a {n_rows}x{n_cols} matrix", lineno)
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(v)
    return np.array(rows, np.int64), np.array(cols, np.int64), np.array(vals, np.float64)


def _entries_fast(lines, ncol, n_rows, n_cols):
    tokens = b" ".join(lines).split()
    if len(tokens) != ncol * len(lines):
        return None
    try:
        arr = np.array(tokens)
        rows = arr[0::ncol].astype(np.int64) - 1
        cols = arr[1::ncol].astype(np.int64) - 1
        vals = arr[2::ncol].astype(np.float64) if ncol == 3 else np.ones(len(lines))
    except ValueError:
        return None
    if rows.size and (rows.min() < 0 or rows.max() >= n_rows or cols.min() < 0 or cols.max() >= n_cols):
        return None
    return rows, cols, vals


def parse_matrix_market(source) -> SparseMatrixCSR:
    """Parse a coordinate Matrix Market file into CSR.

    ``source`` is the file content (bytes or str) or a readable stream.
    Symmetric storage is mirrored, skew-symmetric storage is mirrored with
    negated values, ``pattern`` entries get the value 1.0 and duplicate
    coordinates are summed.
    """
    lines = _text_of(source).splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    header = MatrixMarketHeader.parse(lines[0].decode(errors="replace"))
    k = 1
    while k < len(lines) and (not lines[k].strip() or lines[k].lstrip().startswith(b"%")):
        k += 1
    if k == len(lines):
        raise ParseError("missing size line", k)
    try:
        n_rows, n_cols, nnz = (int(t) for t in lines[k].split())
    except ValueError:
        raise ParseError("size line must hold three integers", k + 1) from None
    if min(n_rows, n_cols, nnz) < 0:
        raise ParseError("negative size", k + 1)
    if header.symmetry != "general" and n_rows != n_cols:
        raise ParseError(f"{header.symmetry} storage requires a square matrix", k + 1)

    body, linenos = [], []
    for lineno, raw in enumerate(lines[k + 1 :], start=k + 2):
        s = raw.strip()
        if s and not s.startswith(b"%"):
            body.append(s)
            linenos.append(lineno)
    if len(body) != nnz:
        where = linenos[nnz] if len(body) > nnz else len(lines)
        raise ParseError(f"size line announces {nnz} entries, found {len(body)}", where)

    ncol = 2 if header.field == "pattern" else 3
    parsed = _entries_fast(body, ncol, n_rows, n_cols)
    if parsed is None:
        parsed = _entries_slow(body, linenos, ncol, n_rows, n_cols)
    rows, cols, vals = parsed

    if header.symmetry != "general":
        if header.symmetry == "skew-symmetric" and np.any(rows == cols):
            bad = int(np.flatnonzero(rows == cols)[0])
            raise ParseError("skew-symmetric file stores a diagonal entry", linenos[bad])
        off = rows != cols
        sign = -1.0 if header.symmetry == "skew-symmetric" else 1.0
        rows, cols, vals = (
            np.concatenate([rows, cols[off]]),
            np.concatenate([cols, rows[off]]),
            np.concatenate([vals, sign * vals[off]]),
        )
    return SparseMatrixCSR.from_coo(n_rows, n_cols, rows, cols, vals)


def read_matrix_market(path) -> SparseMatrixCSR:
    with open(path, "rb") as fh:
        return parse_matrix_market(fh)


def write_matrix_market(m: SparseMatrixCSR, stream=None) -> bytes:
    """Serialize ``m`` as ``coordinate real general`` with round-trip precision.

    Returns the bytes, and also writes them to ``stream`` when one is given.
    """
    out = io.StringIO()
    out.write("%%MatrixMarket matrix coordinate real general\n")
    out.write(f"{m.n_rows} {m.n_cols} {m.nnz}\n")
    rows = (m.row_indices() + 1).tolist()
    cols = (m.col_idx + 1).tolist()
    out.writelines(f"{i} {j} {v!r}\n" for i, j, v in zip(rows, cols, m.values.tolist()))
    data = out.getvalue().encode()
    if stream is not None:
        stream.write(data)
    return data


# --------------------------------------------------------------------------
# collection fetcher
# --------------------------------------------------------------------------

_NAME = re.compile(r"^[A-Za-z0-9_.+-]+$")


def default_cache_dir() -> str:
    return os.environ.get(CACHE_ENV) or os.path.join(os.path.expanduser("~"), ".cache", "reorder_advisor")


def cache_path(group, name, cache_dir=None) -> str:
    for part in (group, name):
        if not _NAME.match(part) or part in (".", ".."):
            raise ConfigError(f"invalid collection name component {part!r}")
    return os.path.join(cache_dir or default_cache_dir(), group, f"{name}.mtx")


def _extract_mtx(payload, name, url):
    try:
        with tarfile.open(fileobj=io.BytesIO(payload), mode="r:*") as tar:
            members = [m for m in tar.getmembers() if m.isfile() and m.name.endswith(".mtx")]
            exact = [m for m in members if os.path.basename(m.name) == f"{name}.mtx"]
            if not (exact or members):
                raise CorruptArchive(f"archive has no {name}.mtx", url)
            return tar.extractfile((exact or members)[0]).read()
    except (tarfile.TarError, EOFError, OSError) as exc:
        raise CorruptArchive(f"unreadable archive: {exc}", url) from None


def fetch_collection_matrix(group, name, cache_dir=None, base_url=DEFAULT_BASE_URL, timeout=60.0) -> str:
    """Local path of ``<cache_dir>/<group>/<name>.mtx``, downloading it on a miss.

    The archive ``<base_url>/<group>/<name>.tar.gz`` is fetched and its
    ``.mtx`` member stored in the cache.  A lock file serializes concurrent
    fetches of the same matrix; a cache hit does no network I/O.
    """
    path = cache_path(group, name, cache_dir)
    if os.path.exists(path):
        return path
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with FileLock(path + ".lock"):
        if os.path.exists(path):  # another process finished first
            return path
        url = f"{base_url.rstrip('/')}/{group}/{name}.tar.gz"
        try:
            with urllib.request.urlopen(url, timeout=timeout) as resp:
                payload = resp.read()
        except (urllib.error.URLError, OSError, ValueError) as exc:
            raise FetchError(f"download of {group}/{name} failed: {exc}", url) from None
        data = _extract_mtx(payload, name, url)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".part")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    return path
