"""Compound, permanental compound and symmetrizer matrices.

Row and column index sets are always ordered lexicographically, see
:mod:`cpdgevd.multiindex`. All functions accept array-likes and return new
arrays.
"""
from __future__ import annotations

import itertools
import math

import numpy as np

from ._validation import as_float_matrix, as_matrix, as_vector, check_same_columns
from .exceptions import BadLengthError, InvalidDimsError, TooLargeError
from .multiindex import Kind, MultiIndexTable

PERMANENT_MAX_SIZE = 20
_CHUNK = 1 << 16


def _index_array(kind, k, n):
    """Tuples of a family as a 0-based ``(card, k)`` integer array."""
    table = MultiIndexTable(Kind(kind), k, n)
    if table.size == 0:
        return np.zeros((0, k), dtype=np.intp)
    flat = np.fromiter(itertools.chain.from_iterable(table), dtype=np.intp,
                       count=table.size * k)
    return flat.reshape(table.size, k) - 1


def _strict_index(k, n):
    return _index_array(Kind.STRICT, k, n)


def compound(A, m: int) -> np.ndarray:
    """m-th compound matrix: all ``m x m`` minors of ``A``.

    Parameters
    ----------
    A : array_like of shape (I, R)
    m : int
        Order, ``1 <= m <= min(I, R)``.

    Returns
    -------
    ndarray of shape (C(I, m), C(R, m))
        Entry ``(i, j)`` is ``det A[S_I(i), S_R(j)]``.
    """
    A = as_float_matrix(A)
    I, R = A.shape
    if not 1 <= m <= min(I, R):
        raise InvalidDimsError(f"order m={m} must lie in 1..{min(I, R)} for a {I}x{R} matrix")
    if m == 1:
        return A.copy()
    rows = _strict_index(m, I)
    cols = _strict_index(m, R)
    out = np.empty((rows.shape[0], cols.shape[0]))
    sub_rows = A[rows]  # (nr, m, R)
    step = max(1, _CHUNK // max(1, rows.shape[0]))
    for start in range(0, cols.shape[0], step):
        cc = cols[start:start + step]
        blocks = sub_rows[:, :, cc]  # (nr, m, nc, m)
        blocks = np.moveaxis(blocks, 2, 1)  # (nr, nc, m, m)
        out[:, start:start + step] = np.linalg.det(blocks)
    return out


def _ryser_exact(M):
    # Gray-code Ryser on Python ints
    n = len(M)
    if n == 0:
        return 1
    row_sums = [0] * n
    total = 0
    sign = -1 if n % 2 else 1
    prev_gray = 0
    for k in range(1, 1 << n):
        gray = k ^ (k >> 1)
        diff = gray ^ prev_gray
        j = diff.bit_length() - 1
        add = 1 if gray & diff else -1
        for i in range(n):
            row_sums[i] += add * M[i][j]
        prev_gray = gray
        prod = 1
        for s in row_sums:
            prod *= s
            if prod == 0:
                break
        popcount = bin(gray).count("1")
        total += prod if popcount % 2 == 0 else -prod
    return sign * total


def permanent(M):
    """Permanent of a square matrix by Ryser's formula.

    Integer input is evaluated in exact integer arithmetic and an ``int`` is
    returned; any other input gives a float.

    Raises
    ------
    TooLargeError
        If the matrix is larger than ``PERMANENT_MAX_SIZE``.
    """
    arr = np.asarray(M)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidDimsError(f"permanent needs a square matrix, got shape {arr.shape}")
    n = arr.shape[0]
    if n > PERMANENT_MAX_SIZE:
        raise TooLargeError(f"permanent size {n} exceeds the cap {PERMANENT_MAX_SIZE}")
    if n == 0:
        return 1
    if np.issubdtype(arr.dtype, np.integer) or arr.dtype == np.bool_:
        return _ryser_exact(arr.astype(object).tolist())
    arr = as_float_matrix(arr, name="M")
    return float(_batch_permanent(arr[None])[0])


def _subset_masks(m):
    masks = np.array(list(itertools.product((0.0, 1.0), repeat=m)))[1:]
    signs = (-1.0) ** (m - masks.sum(axis=1))
    return masks, signs


def _batch_permanent(blocks):
    """Permanents of a stack ``(N, m, m)`` via vectorized Ryser."""
    m = blocks.shape[-1]
    masks, signs = _subset_masks(m)
    sums = blocks @ masks.T  # (N, m, 2^m - 1)
    return np.prod(sums, axis=1) @ signs


def naive_permanent(M):
    """Permanent by summing over all ``n!`` permutations (test oracle)."""
    arr = np.asarray(M)
    n = arr.shape[0]
    total = 0
    for p in itertools.permutations(range(n)):
        prod = 1
        for i, j in enumerate(p):
            prod = prod * arr[i, j]
        total = total + prod
    return total


def _perm_table(C, row_idx, m):
    C = as_float_matrix(C, name="C")
    R = C.shape[1]
    cols = _strict_index(m, R)
    out = np.empty((row_idx.shape[0], cols.shape[0]))
    sub_rows = C[row_idx]  # (nr, m, R)
    step = max(1, _CHUNK // max(1, row_idx.shape[0]))
    for start in range(0, cols.shape[0], step):
        cc = cols[start:start + step]
        blocks = np.moveaxis(sub_rows[:, :, cc], 2, 1)
        nr, nc = blocks.shape[:2]
        out[:, start:start + step] = _batch_permanent(blocks.reshape(nr * nc, m, m)).reshape(nr, nc)
    return out


def permanental_compound(C, m: int) -> np.ndarray:
    """m-th permanental compound: permanents of all ``m x m`` submatrices.

    Returns an array of shape ``(C(K, m), C(R, m))``.
    """
    C = as_float_matrix(C, name="C")
    K, R = C.shape
    if not 1 <= m <= min(K, R):
        raise InvalidDimsError(f"order m={m} must lie in 1..{min(K, R)}")
    return _perm_table(C, _strict_index(m, K), m)


def r_matrix(C, m: int) -> np.ndarray:
    """Permanents of ``C`` with rows from all m-tuples over ``1..K``.

    Shape ``(K**m, C(R, m))``. Column ``(j1, ..., jm)`` equals
    ``m! * sym_project(c_j1 x ... x c_jm)``.
    """
    C = as_float_matrix(C, name="C")
    K, R = C.shape
    if not 1 <= m <= R:
        raise InvalidDimsError(f"order m={m} must lie in 1..{R}")
    return _perm_table(C, _index_array(Kind.ALL, m, K), m)


def _q_rows_in_r(K, m):
    # position in the all-tuples family of each non-decreasing tuple
    q = _index_array(Kind.NONDECREASING, m, K)
    weights = K ** np.arange(m - 1, -1, -1)
    return q @ weights


def q_matrix(C, m: int) -> np.ndarray:
    """``r_matrix`` restricted to non-decreasing row tuples.

    Shape ``(C(K + m - 1, m), C(R, m))``.
    """
    C = as_float_matrix(C, name="C")
    return r_matrix(C, m)[_q_rows_in_r(C.shape[0], m)]


def symmetrizer_G(K: int, m: int) -> np.ndarray:
    """Basis of the symmetric subspace, one column per non-decreasing tuple.

    Column ``(j1, ..., jm)`` is ``sym_project(e_j1 x ... x e_jm)``. Shape
    ``(K**m, C(K + m - 1, m))``.
    """
    allt = _index_array(Kind.ALL, m, K)
    srt = np.sort(allt, axis=1)
    weights = K ** np.arange(m - 1, -1, -1)
    q = _index_array(Kind.NONDECREASING, m, K)
    q_pos = {int(v): i for i, v in enumerate(q @ weights)}
    col = np.array([q_pos[int(v)] for v in srt @ weights], dtype=np.intp)
    # weight = (number of distinct rearrangements)^-1
    counts = np.stack([(srt == a).sum(axis=1) for a in range(K)], axis=1)
    denom = math.factorial(m) / np.prod([[math.factorial(int(c)) for c in row] for row in counts], axis=1)
    G = np.zeros((K**m, q.shape[0]))
    G[np.arange(K**m), col] = 1.0 / denom
    return G


def selector_H(K: int, m: int) -> np.ndarray:
    """0/1 matrix mapping each m-tuple to its sorted tuple, ``H @ symmetrizer_G == I``.

    Column ``(j1, ..., jm)`` is the canonical basis vector at the position of
    ``sort_tuple((j1, ..., jm))``. Shape ``(C(K + m - 1, m), K**m)``.
    """
    allt = _index_array(Kind.ALL, m, K)
    weights = K ** np.arange(m - 1, -1, -1)
    q = _index_array(Kind.NONDECREASING, m, K)
    q_pos = {int(v): i for i, v in enumerate(q @ weights)}
    rows = np.array([q_pos[int(v)] for v in np.sort(allt, axis=1) @ weights], dtype=np.intp)
    H = np.zeros((q.shape[0], K**m))
    H[rows, np.arange(K**m)] = 1.0
    return H


def sym_project(v, m: int) -> np.ndarray:
    """Orthogonal projection of a vectorized order-m tensor onto symmetric ones.

    Parameters
    ----------
    v : array_like of length ``K**m``
    m : int
        Tensor order.
    """
    v = as_vector(np.asarray(v, dtype=float))
    K = round(v.size ** (1.0 / m)) if v.size else 0
    for cand in (K - 1, K, K + 1):
        if cand >= 1 and cand**m == v.size:
            K = cand
            break
    else:
        raise BadLengthError(f"length {v.size} is not a perfect {m}-th power")
    t = v.reshape((K,) * m)
    acc = np.zeros_like(t)
    for p in itertools.permutations(range(m)):
        acc += np.transpose(t, p)
    return (acc / math.factorial(m)).ravel()


def mirror_L(K: int) -> np.ndarray:
    """Anti-diagonal matrix with alternating signs ``+, -, +, ...``."""
    if K < 1:
        raise InvalidDimsError("K must be positive")
    L = np.zeros((K, K))
    j = np.arange(K)
    L[K - 1 - j, j] = (-1.0) ** j
    return L


def b_matrix(C) -> np.ndarray:
    """``L @ C_{K-1}(C)``: normals to every span of ``K - 1`` columns of ``C``.

    Column ``(i1, ..., i_{K-1})`` is orthogonal to ``c_i1, ..., c_i{K-1}``.
    No normalization is applied.
    """
    C = as_float_matrix(C, name="C")
    K, R = C.shape
    if K < 2 or K > R:
        raise InvalidDimsError(f"need 2 <= K <= R, got K={K}, R={R}")
    return mirror_L(K) @ compound(C, K - 1)


def khatri_rao(A, B) -> np.ndarray:
    """Column-wise Kronecker product; column ``r`` is ``kron(a_r, b_r)``."""
    A = as_matrix(A, name="A")
    B = as_matrix(B, name="B")
    R = check_same_columns(A, B)
    return (A[:, None, :] * B[None, :, :]).reshape(A.shape[0] * B.shape[0], R)


def khatri_rao_power(F, l: int) -> np.ndarray:
    """``F`` Khatri-Rao multiplied with itself ``l`` times."""
    F = as_matrix(F, name="F")
    if l < 1:
        raise InvalidDimsError("power must be positive")
    out = F
    for _ in range(l - 1):
        out = khatri_rao(out, F)
    return out


def diag_compound_vector(d, k: int) -> np.ndarray:
    """Products ``d_i1 * ... * d_ik`` over strictly increasing k-tuples."""
    d = as_vector(np.asarray(d))
    if not 1 <= k <= d.size:
        raise InvalidDimsError(f"k={k} must lie in 1..{d.size}")
    idx = _strict_index(k, d.size)
    return np.prod(d[idx], axis=1)


def k_rank(A, tol: float = 1e-9) -> int:
    """Kruskal rank by brute force over column subsets (small matrices only).

    A subset counts as independent when its smallest singular value exceeds
    ``tol`` times the largest singular value of ``A``.
    """
    A = as_float_matrix(A)
    R = A.shape[1]
    scale = np.linalg.norm(A, 2)
    if scale == 0:
        return 0
    best = 0
    for k in range(1, min(A.shape) + 1):
        idx = _strict_index(k, R)
        sv = np.linalg.svd(A[:, idx].transpose(1, 0, 2), compute_uv=False)
        if np.all(sv[:, -1] > tol * scale):
            best = k
        else:
            break
    return best
