"""Input validation helpers shared by the public functions."""
import numbers

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import BadShapeError, ColumnMismatchError


def as_matrix(A, name="A", dtype="numeric"):
    """Return ``A`` as a finite 2-D array.

    Integer inputs keep their dtype when ``dtype="numeric"`` so that exact
    integer routines (permanents) stay exact.
    """
    try:
        return check_array(A, dtype=dtype, ensure_2d=True, ensure_min_samples=1,
                           ensure_min_features=1, input_name=name)
    except ValueError as exc:
        raise BadShapeError(f"{name}: {exc}") from exc


def as_float_matrix(A, name="A"):
    return as_matrix(A, name=name, dtype=np.float64)


def as_tensor3(T, name="T"):
    """Return ``T`` as a finite float array of shape ``(I, J, K)``."""
    try:
        arr = check_array(T, dtype=np.float64, allow_nd=True, ensure_2d=False,
                          input_name=name)
    except ValueError as exc:
        raise BadShapeError(f"{name}: {exc}") from exc
    if arr.ndim != 3:
        raise BadShapeError(f"{name} must be a third-order array, got ndim={arr.ndim}")
    if min(arr.shape) < 1:
        raise BadShapeError(f"{name} has an empty dimension: {arr.shape}")
    return arr


def as_vector(v, name="v"):
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise BadShapeError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise BadShapeError(f"{name} contains non-finite values")
    return arr


def check_same_columns(*mats):
    ncols = {M.shape[1] for M in mats}
    if len(ncols) != 1:
        raise ColumnMismatchError(f"column counts differ: {sorted(ncols)}")
    return ncols.pop()


def check_positive_int(value, name, minimum=1):
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)
