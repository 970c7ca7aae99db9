"""Mixed discriminants, polarized compounds and detecting matrices.

The polarized compound ``Phi(T_1, ..., T_m)`` is the multilinear symmetric
extension of ``C_m(T)``, normalized so that ``Phi(T, ..., T) = m! C_m(T)``.
It is evaluated by polarization,

    Phi(T_1, ..., T_m) = sum_{k=1}^{m} (-1)^{m-k} sum_{|S| = k} C_m(sum_{i in S} T_i),

which is exact for the degree-m polynomial ``C_m``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ._validation import as_float_matrix, as_tensor3
from .compound import _index_array, compound
from .exceptions import InvalidDimsError
from .multiindex import Kind


def _check_slices(slices, m=None):
    mats = [as_float_matrix(S, name="slice") for S in slices]
    if len(mats) < 1:
        raise InvalidDimsError("need at least one slice")
    shape = mats[0].shape
    if any(M.shape != shape for M in mats):
        raise InvalidDimsError("all slices must have the same shape")
    if m is not None and len(mats) != m:
        raise InvalidDimsError(f"expected {m} slices, got {len(mats)}")
    return mats


def _polarization(mats, fn):
    m = len(mats)
    total = None
    for k in range(1, m + 1):
        sign = (-1.0) ** (m - k)
        for subset in itertools.combinations(range(m), k):
            val = sign * fn(sum(mats[i] for i in subset))
            total = val if total is None else total + val
    return total


def mixed_discriminant(slices) -> float:
    """Mixed discriminant of ``m`` square matrices of size ``m``.

    Returns the coefficient of ``x_1 ... x_m`` in ``det(sum_i x_i T_i)``.
    For equal arguments ``D(T, ..., T) = m! det(T)``.
    """
    mats = _check_slices(slices)
    m = len(mats)
    if mats[0].shape != (m, m):
        raise InvalidDimsError(f"{m} slices must each be {m}x{m}, got {mats[0].shape}")
    return float(_polarization(mats, np.linalg.det))


def polarized_compound(slices, m: int | None = None) -> np.ndarray:
    """Polarized compound matrix of ``m`` slices of size ``I x J``.

    Parameters
    ----------
    slices : sequence of m array_like of shape (I, J)
    m : int, optional
        Number of slices, checked when given.

    Returns
    -------
    ndarray of shape (C(I, m), C(J, m))
        Entry ``(i, j)`` is the mixed discriminant of the ``m x m``
        submatrices with rows ``S_I(i)`` and columns ``S_J(j)``.
    """
    mats = _check_slices(slices, m)
    m = len(mats)
    I, J = mats[0].shape
    if m > min(I, J):
        raise InvalidDimsError(f"m={m} exceeds min(I, J)={min(I, J)}")
    return _polarization(mats, lambda S: compound(S, m))


@dataclass(frozen=True)
class DetectingMatrix:
    """Columns of vectorized polarized compounds of slice tuples.

    Attributes
    ----------
    kind : {"Tm", "Rm"}
        ``"Tm"`` indexes columns by non-decreasing tuples, ``"Rm"`` by all
        tuples.
    m : int
    body : ndarray of shape (C(I, m) * C(J, m), n_cols)
    """

    kind: str
    m: int
    body: np.ndarray

    @property
    def shape(self):
        return self.body.shape


def build_detecting(T, m: int, kind: str = "Tm") -> DetectingMatrix:
    """Detecting matrix of a third-order tensor.

    Column ``(j1, ..., jm)`` is ``vec(Phi(T_j1, ..., T_jm))`` where ``vec``
    stacks columns (Fortran order). With this convention a tensor
    ``[A, B, C]_R`` satisfies ``Tm = khatri_rao(C_m(B), C_m(A)) @ q_matrix(C, m).T``.

    Compounds of the slice sums are memoized by the multiset of slice
    indices, so each distinct sum is processed once.
    """
    T = as_tensor3(T)
    I, J, K = T.shape
    if kind not in ("Tm", "Rm"):
        raise InvalidDimsError(f"kind must be 'Tm' or 'Rm', got {kind!r}")
    if not 1 <= m <= min(I, J):
        raise InvalidDimsError(f"m={m} must lie in 1..{min(I, J)}")
    cache = {}

    def cm(counts):
        val = cache.get(counts)
        if val is None:
            S = np.tensordot(T, np.asarray(counts, dtype=float), axes=([2], [0]))
            val = compound(S, m).ravel(order="F")
            cache[counts] = val
        return val

    q = _index_array(Kind.NONDECREASING, m, K)
    nrows = _index_array(Kind.STRICT, m, I).shape[0] * _index_array(Kind.STRICT, m, J).shape[0]
    body = np.zeros((nrows, q.shape[0]))
    for col, tup in enumerate(q):
        acc = body[:, col]
        for k in range(1, m + 1):
            sign = (-1.0) ** (m - k)
            for subset in itertools.combinations(tup, k):
                counts = [0] * K
                for s in subset:
                    counts[s] += 1
                acc += sign * cm(tuple(counts))
    if kind == "Rm":
        allt = _index_array(Kind.ALL, m, K)
        weights = K ** np.arange(m - 1, -1, -1)
        q_pos = {int(v): i for i, v in enumerate(q @ weights)}
        cols = [q_pos[int(v)] for v in np.sort(allt, axis=1) @ weights]
        body = body[:, cols]
    return DetectingMatrix(kind, m, body)
