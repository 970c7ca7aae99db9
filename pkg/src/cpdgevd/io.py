"""Plain-text tensor and factor files.

Tensor files start with the header ``tensor3 I J K`` followed by the
``I*J*K`` entries, frontal slice by frontal slice, each slice row by row.
Factor files start with ``cpd I J K R`` followed by the blocks ``A``, ``B``
and ``C``, each a header line and then its rows. Numbers are written with 17
significant digits so a write/read round trip is exact.
"""
from __future__ import annotations

import math

import numpy as np

from ._validation import as_tensor3
from .exceptions import FormatError
from .tensor import Cpd

_FMT = "%.17g"


def _read_tokens(path):
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read().split()
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not a text file") from exc


def _dims(tokens, n, path):
    try:
        dims = [int(t) for t in tokens[:n]]
    except ValueError as exc:
        raise FormatError(f"{path}: malformed header") from exc
    if len(dims) != n or any(d < 1 for d in dims):
        raise FormatError(f"{path}: header needs {n} positive sizes")
    return dims


def _floats(tokens, path):
    try:
        vals = np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise FormatError(f"{path}: non-numeric entry") from exc
    if not np.all(np.isfinite(vals)):
        raise FormatError(f"{path}: non-finite entry")
    return vals


def write_tensor(path, T) -> None:
    """Write a third-order tensor in the text format described above."""
    T = as_tensor3(T)
    I, J, K = T.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"tensor3 {I} {J} {K}\n")
        for k in range(K):
            np.savetxt(fh, T[:, :, k], fmt=_FMT)


def read_tensor(path) -> np.ndarray:
    """Read a tensor file.

    Raises
    ------
    FormatError
        On a bad header, a wrong number of entries or a non-finite value.
    OSError
        If the file cannot be read.
    """
    tok = _read_tokens(path)
    if not tok or tok[0] != "tensor3":
        raise FormatError(f"{path}: expected header 'tensor3 I J K'")
    I, J, K = _dims(tok[1:], 3, path)
    body = tok[4:]
    if len(body) != I * J * K:
        raise FormatError(f"{path}: expected {I * J * K} values, found {len(body)}")
    return _floats(body, path).reshape(K, I, J).transpose(1, 2, 0).copy()


def write_factors(path, cpd: Cpd) -> None:
    """Write a CPD in the factor file format."""
    I, J, K = cpd.dims
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"cpd {I} {J} {K} {cpd.rank}\n")
        for name, X in (("A", cpd.A), ("B", cpd.B), ("C", cpd.C)):
            fh.write(name + "\n")
            np.savetxt(fh, X, fmt=_FMT)


def read_factors(path) -> Cpd:
    """Read a factor file written by :func:`write_factors`."""
    tok = _read_tokens(path)
    if not tok or tok[0] != "cpd":
        raise FormatError(f"{path}: expected header 'cpd I J K R'")
    I, J, K, R = _dims(tok[1:], 4, path)
    pos = 5
    mats = []
    for name, rows in (("A", I), ("B", J), ("C", K)):
        if pos >= len(tok) or tok[pos] != name:
            raise FormatError(f"{path}: missing block {name}")
        pos += 1
        n = rows * R
        chunk = tok[pos:pos + n]
        if len(chunk) != n or (pos + n < len(tok) and not _is_label(tok[pos + n])):
            raise FormatError(f"{path}: block {name} must hold {rows} x {R} values")
        mats.append(_floats(chunk, path).reshape(rows, R))
        pos += n
    if pos != len(tok):
        raise FormatError(f"{path}: trailing data")
    return Cpd(*mats)


def _is_label(token):
    return token in ("A", "B", "C")


def format_float(x) -> str:
    """Render a scalar for diagnostics output."""
    if x is None:
        return "n/a"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return f"{x:.3e}"
