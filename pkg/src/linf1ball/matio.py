"""Matrix file formats: plain CSV and a small binary container.

CSV files hold one matrix row per line, comma-separated decimal floats, no
header; values are written with 17 significant digits so a write/read
round-trip is value-exact.  The binary ``raw`` format is magic bytes
``L1IN``, two little-endian 64-bit unsigned dimensions (rows, columns) and
the row-major float64 payload; round-trips are bit-exact.
"""

import struct

import numpy as np

from ._validate import as_matrix

__all__ = ["MatrixFormatError", "read_matrix", "write_matrix", "FORMATS"]

MAGIC = b"L1IN"
FORMATS = ("csv", "raw")
_HEADER = struct.Struct("<QQ")
_DIM_CAP = 1 << 48  # rows/cols beyond this are corrupt headers, not data


class MatrixFormatError(ValueError):
    """Raised when a matrix file cannot be parsed."""


def write_matrix(path, B, fmt="csv"):
    """Write ``B`` to ``path`` in the given format."""
    B = as_matrix(B)
    if fmt == "csv":
        with open(path, "w", encoding="ascii") as fh:
            for row in B:
                fh.write(",".join(format(x, ".17g") for x in row))
                fh.write("\n")
    elif fmt == "raw":
        m, n = B.shape
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(_HEADER.pack(m, n))
            fh.write(np.ascontiguousarray(B, dtype="<f8").tobytes())
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def read_matrix(path, fmt="csv"):
    """Read a matrix written by :func:`write_matrix`."""
    if fmt == "csv":
        return _read_csv(path)
    if fmt == "raw":
        return _read_raw(path)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def _read_csv(path):
    rows = []
    width = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            fields = line.split(",")
            if width is None:
                width = len(fields)
            elif len(fields) != width:
                raise MatrixFormatError(
                    f"{path}: line {lineno}: expected {width} fields, "
                    f"got {len(fields)}"
                )
            try:
                rows.append([float(x) for x in fields])
            except ValueError as exc:
                raise MatrixFormatError(
                    f"{path}: line {lineno}: {exc}"
                ) from None
    if not rows:
        raise MatrixFormatError(f"{path}: no matrix rows found")
    B = np.asarray(rows, dtype=np.float64)
    if not np.all(np.isfinite(B)):
        raise MatrixFormatError(f"{path}: matrix contains non-finite values")
    return B


def _read_raw(path):
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise MatrixFormatError(
            f"{path}: offset 0: bad magic {data[:4]!r}, expected {MAGIC!r}"
        )
    if len(data) < 4 + _HEADER.size:
        raise MatrixFormatError(f"{path}: truncated header ({len(data)} bytes)")
    m, n = _HEADER.unpack_from(data, 4)
    if m < 1 or n < 1 or m > _DIM_CAP or n > _DIM_CAP:
        raise MatrixFormatError(f"{path}: offset 4: implausible dimensions {m}x{n}")
    expected = 4 + _HEADER.size + 8 * m * n
    if len(data) != expected:
        raise MatrixFormatError(
            f"{path}: payload is {len(data)} bytes, expected {expected} "
            f"for a {m}x{n} matrix"
        )
    B = np.frombuffer(data, dtype="<f8", offset=4 + _HEADER.size)
    return B.reshape(m, n).astype(np.float64, copy=True)
