"""Comparison of decompositions and checks of the ``B(C)`` properties."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from ._validation import as_float_matrix, as_vector
from .compound import b_matrix
from .exceptions import BadShapeError, NoBijectionError
from .multiindex import binom
from .tensor import Cpd


@dataclass(frozen=True)
class MatchResult:
    """Column correspondence between an estimate and a reference CPD.

    Attributes
    ----------
    permutation : ndarray of int, shape (R,)
        ``permutation[r]`` is the estimated column matched to reference
        column ``r``.
    scalings : ndarray of shape (3, R)
        Factors applied to the matched estimated columns of ``A``, ``B``
        and ``C``; each column of the array multiplies to one.
    max_column_error : float
        Largest relative column error after permutation and scaling.
    min_similarity : float
        Smallest triple-cosine similarity among matched pairs.
    """

    permutation: np.ndarray
    scalings: np.ndarray
    max_column_error: float
    min_similarity: float


def _abs_cos(X, Y):
    nx = np.linalg.norm(X, axis=0)
    ny = np.linalg.norm(Y, axis=0)
    nx[nx == 0] = 1.0
    ny[ny == 0] = 1.0
    return np.abs((X / nx).T @ (Y / ny))


def match_factors(est: Cpd, ref: Cpd, tol: float = 1e-2) -> MatchResult:
    """Match columns of ``est`` to ``ref`` up to permutation and scaling.

    The similarity of two rank-1 terms is the product of the absolute
    cosines of their three factor columns. Pairs are assigned greedily,
    most similar first.

    Parameters
    ----------
    est, ref : Cpd
        Decompositions with equal dimensions and rank.
    tol : float, default=1e-2
        Every matched pair must have similarity at least ``1 - tol``.

    Raises
    ------
    NoBijectionError
        If some reference column has no sufficiently similar partner.
    """
    if est.dims != ref.dims or est.rank != ref.rank:
        raise BadShapeError(f"cannot match rank-{est.rank} {est.dims} against "
                            f"rank-{ref.rank} {ref.dims}")
    R = ref.rank
    S = _abs_cos(est.A, ref.A) * _abs_cos(est.B, ref.B) * _abs_cos(est.C, ref.C)
    order = np.argsort(-S, axis=None, kind="stable")
    perm = -np.ones(R, dtype=int)
    taken = np.zeros(R, dtype=bool)
    for flat in order:
        p, r = divmod(int(flat), R)
        if perm[r] < 0 and not taken[p]:
            perm[r] = p
            taken[p] = True
    sims = S[perm, np.arange(R)]
    if sims.min() < 1 - tol:
        raise NoBijectionError(f"best assignment has similarity {sims.min():.3g} < {1 - tol:g}")
    scal = np.empty((3, R))
    err = 0.0
    for f, (E, F) in enumerate(((est.A, ref.A), (est.B, ref.B))):
        Ep = E[:, perm]
        scal[f] = np.sum(Ep * F, axis=0) / np.sum(Ep * Ep, axis=0)
    scal[2] = 1.0 / (scal[0] * scal[1])
    for f, (E, F) in enumerate(((est.A, ref.A), (est.B, ref.B), (est.C, ref.C))):
        D = E[:, perm] * scal[f] - F
        rel = np.linalg.norm(D, axis=0) / np.linalg.norm(F, axis=0)
        err = max(err, float(rel.max()))
    return MatchResult(perm, scal, err, float(sims.min()))


def nnz_count(v, tau: float = 1e-9) -> int:
    """Number of entries with ``|v_i| > tau * max|v|``."""
    v = np.abs(as_vector(np.asarray(v, dtype=float)))
    if v.size == 0 or v.max() == 0:
        return 0
    return int(np.sum(v > tau * v.max()))


@dataclass
class BCReport:
    """Result of :func:`check_bc_properties`.

    ``dependent_subsets`` lists (1-based) the groups of columns of ``B(C)``
    that share a common normal; there should be exactly ``R`` of them.
    """

    p1: bool = True
    p2: bool = True
    p3: bool = True
    p4: bool = True
    zero_pattern: bool = True
    dependent_subsets: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.p1 and self.p2 and self.p3 and self.p4 and self.zero_pattern


def _orthogonal(X, Y, tol):
    # entry (i, j): column i of X orthogonal to column j of Y
    return _abs_cos(X, Y) <= tol


def check_bc_properties(C, tol: float = 1e-9) -> BCReport:
    """Check the orthogonality relations between ``C`` and ``B(C)``.

    Verified relations, for ``C`` of size ``K x R`` with k-rank ``K``:

    * every column of ``B(C)`` is orthogonal to exactly ``K - 1`` columns of
      ``C``, namely those indexing it (zero pattern of ``C^T B(C)``);
    * the unit normal of any ``K - 1`` columns of ``C`` is collinear with a
      column of ``B(C)``;
    * every column of ``C`` is orthogonal to exactly ``C(R-1, K-2)`` columns
      of ``B(C)``;
    * the common normals of ``C(R-1, K-2)`` columns of ``B(C)`` are exactly
      the columns of ``C`` (searched over hyperplanes spanned by ``K - 1``
      columns of ``B(C)``).
    """
    C = as_float_matrix(C, name="C")
    K, R = C.shape
    rep = BCReport()
    Bc = b_matrix(C)
    subsets = list(itertools.combinations(range(R), K - 1))
    Z = _orthogonal(C, Bc, tol)  # (R, N)

    for s, sub in enumerate(subsets):
        rows = set(np.flatnonzero(Z[:, s]))
        if len(rows) != K - 1:
            rep.p1 = False
            rep.violations.append(f"P1: column {s + 1} of B(C) orthogonal to {len(rows)} columns")
        if rows != set(sub):
            rep.zero_pattern = False
            rep.violations.append(f"zero pattern: column {s + 1} zeros at {sorted(int(r) + 1 for r in rows)}")
        x = linalg.null_space(C[:, list(sub)].T)
        if x.shape[1] != 1 or _abs_cos(x, Bc).max() < 1 - tol ** 0.5:
            rep.p2 = False
            rep.violations.append(f"P2: normal of columns {[i + 1 for i in sub]} not in B(C)")

    need = binom(R - 1, K - 2)
    for r in range(R):
        cnt = int(Z[r].sum())
        if cnt != need:
            rep.p3 = False
            rep.violations.append(f"P3: column {r + 1} of C orthogonal to {cnt} columns of B(C)")

    # common normals of large groups of B(C) columns
    N = Bc.shape[1]
    normals = []
    groups = []
    for sub in itertools.combinations(range(N), K - 1):
        x = linalg.null_space(Bc[:, list(sub)].T)
        if x.shape[1] != 1:
            continue
        hits = np.flatnonzero(_orthogonal(x, Bc, tol)[0])
        if len(hits) < need:
            continue
        x = x[:, 0]
        if any(abs(x @ y) >= 1 - tol ** 0.5 for y in normals):
            continue
        normals.append(x)
        groups.append(tuple(int(h) + 1 for h in hits))
    rep.dependent_subsets = groups
    if len(normals) != R:
        rep.p4 = False
        rep.violations.append(f"P4: {len(normals)} common normals, expected {R}")
    elif normals and _abs_cos(np.array(normals).T, C).max(axis=1).min() < 1 - tol ** 0.5:
        rep.p4 = False
        rep.violations.append("P4: a common normal is not collinear with a column of C")
    return rep


def kruskal_rank(A, tol: float = 1e-9) -> int:
    """Kruskal rank by brute force (exponential, small matrices only)."""
    from .compound import k_rank
    return k_rank(A, tol)
