"""Algebraic CPD when the third factor has fewer rows than the rank.

Let ``T = [A, B, C]_R`` with ``C`` of size ``K x R`` and ``k_C = K``. With
``m = R - K + 2`` the kernel of the order-m detecting matrix, once
symmetrized, is spanned by ``B(C)`` Khatri-Rao powers. A GEVD of the kernel
tensor returns a matrix ``F`` equal to ``B(C)`` up to column permutation and
scaling (phase 1). Two continuations are available:

``alg1``
    Recover the columns of ``C`` as common normals of groups of columns of
    ``F`` (phase 2), then ``A`` and ``B`` through a smaller GEVD (phase 3).
``alg2``
    Transform the tensor with ``F``, find the slice pairs whose pencil has
    rank ``m``, solve one small GEVD per pair and cluster the resulting
    rank-1 terms. ``C`` follows by least squares.
"""
from __future__ import annotations

import enum
import time
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import linalg

from ._validation import as_float_matrix, as_tensor3, check_positive_int
from .compound import b_matrix, khatri_rao, symmetrizer_G
from .exceptions import (AlignmentFailedError, ClusterCountMismatchError, GEVDError,
                         InvalidDimsError, KernelDimMismatchError, NotEnoughColumnsError,
                         PairScanEmptyError, Rank1SplitFailedError, ResidualTooLargeError,
                         TooLargeError, TooManyColumnsError, WCpdFailedError)
from .gevd import cpd_gevd
from .multiindex import binom
from .polarize import build_detecting
from .tensor import (Cpd, default_rng, polish_cpd, matricize, normalize_cpd, numerical_rank,
                     random_slice_mixture, reduce_third_mode, residual, tensorize)
from .tolerance import ToleranceConfig, resolve_tol

# beyond this many (K-1)-subsets the normal search of alg1 is refused
MAX_NORMAL_SUBSETS = 2_000_000
# pairs processed per batched SVD in the alg2 scan
_PAIR_BATCH = 4096

__all__ = ["KcVerdict", "DiagnosticsReport", "ToleranceConfig", "phase1_find_F",
           "phase2_columns_of_C", "phase3_AB_given_C", "algo2_find_AB", "cpd"]


class KcVerdict(str, enum.Enum):
    """What the phase 1 checks imply about the k-rank of ``C``."""

    AT_LEAST_K_MINUS_1 = "AtLeastKminus1"
    EQUALS_K = "EqualsK"
    VIOLATED = "Violated"


@dataclass
class DiagnosticsReport:
    """Outcome of the working-condition checks.

    Attributes
    ----------
    kernel_dim_found : int
        Numerical kernel dimension of the detecting matrix.
    kernel_dim_expected : int
        ``C(R, K - 1)``.
    kc_verdict : KcVerdict or None
        ``EQUALS_K`` after a successful kernel tensor CPD,
        ``AT_LEAST_K_MINUS_1`` when only the kernel dimension is right,
        ``VIOLATED`` when the kernel dimension is wrong.
    compound_kr_full_rank : bool or None
        Whether the compound Khatri-Rao product is known to have full
        column rank.
    singular_value_gap : float
        Ratio of the smallest kept to the largest discarded singular value
        (``inf`` when the discarded ones are exactly zero).
    """

    kernel_dim_found: int | None = None
    kernel_dim_expected: int | None = None
    kc_verdict: KcVerdict | None = None
    compound_kr_full_rank: bool | None = None
    singular_value_gap: float | None = None
    m: int | None = None
    K_reduced: int | None = None
    K_used: int | None = None
    algorithm: str | None = None
    mixture_applied: bool = False
    inner_residual: float | None = None
    normal_residual: float | None = None
    pairs_scanned: int | None = None
    pair_count: int | None = None
    ambiguous_pairs: int | None = None
    pairs: list = field(default_factory=list)
    cluster_sizes: list = field(default_factory=list)
    residual: float | None = None
    algebraic_residual: float | None = None
    polished: bool = False
    timings: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        if self.kc_verdict is not None:
            d["kc_verdict"] = self.kc_verdict.value
        return d


def _unit_columns(X):
    nrm = np.linalg.norm(X, axis=0)
    nrm[nrm == 0] = 1.0
    X = X / nrm
    idx = np.argmax(np.abs(X), axis=0)
    sign = np.sign(X[idx, np.arange(X.shape[1])])
    sign[sign == 0] = 1.0
    return X * sign


def _max_offdiag_cos(X):
    U = _unit_columns(X)
    G = np.abs(U.T @ U)
    np.fill_diagonal(G, 0.0)
    return float(G.max()) if G.size else 0.0


def _min_angle(X):
    # angle rather than 1 - cos: genuinely close columns must survive
    c = min(_max_offdiag_cos(X), 1.0)
    return float(np.arcsin(np.sqrt((1.0 - c) * (1.0 + c))))


def kernel_basis(M, tol_rank=1e-9):
    """Numerical kernel of ``M`` by a full SVD.

    Returns
    -------
    basis : ndarray of shape (n_cols, d)
    gap : float
        Smallest kept over largest discarded singular value.
    """
    M = as_float_matrix(M, name="M")
    _, s, Vt = linalg.svd(M, full_matrices=True)
    kept = numerical_rank(s, tol_rank)
    if kept == 0:
        gap = 0.0
    elif kept < s.size and s[kept] > 0:
        gap = float(s[kept - 1] / s[kept])
    else:
        gap = float("inf")
    return Vt[kept:].T.copy(), gap


def _sym_power(f, m):
    out = f
    for _ in range(m - 1):
        out = np.multiply.outer(out, f)
    return out.ravel()


def _sym_power_jacobian(f, m):
    K = f.size
    t = _sym_power(f, m - 1).reshape((K,) * (m - 1)) if m > 1 else np.ones(())
    base = np.multiply.outer(t, np.eye(K))
    D = sum(np.moveaxis(base, m - 1, p) for p in range(m))
    return D.reshape(K**m, K)


def refine_normals(F, W, m, max_iter=8):
    """Polish columns ``f`` of ``F`` so that ``f^(x)m`` lies in ``range(W)``.

    Gauss-Newton on the unit sphere for each column, started from the
    GEVD estimate. The exact columns are isolated zeros of the residual, so
    the iteration converges to the accuracy of ``W`` itself.

    Returns
    -------
    F : ndarray
        Refined unit columns.
    worst : float
        Largest distance of a refined ``f^(x)m`` to ``range(W)``.
    """
    Q = linalg.orth(W)
    out = _unit_columns(np.asarray(F, dtype=float))
    worst = 0.0
    for r in range(out.shape[1]):
        f = out[:, r]
        v = _sym_power(f, m)
        res = v - Q @ (Q.T @ v)
        best = np.linalg.norm(res)
        for _ in range(max_iter):
            if best == 0.0:
                break
            J = _sym_power_jacobian(f, m)
            J -= Q @ (Q.T @ J)
            N = linalg.null_space(f[None, :])
            step = N @ linalg.lstsq(J @ N, -res)[0]
            g = f + step
            g /= np.linalg.norm(g)
            v = _sym_power(g, m)
            res_g = v - Q @ (Q.T @ v)
            nrm = np.linalg.norm(res_g)
            if nrm >= best:
                break
            f, res, best = g, res_g, nrm
        out[:, r] = f
        worst = max(worst, best)
    return _unit_columns(out), worst


def phase1_find_F(T, R: int, tol=None, seed=None):
    """Find ``F``, equal to ``B(C)`` up to column permutation and scaling.

    Parameters
    ----------
    T : array_like of shape (I, J, K)
        Tensor whose third factor is assumed to have k-rank ``K``.
    R : int
        Rank.
    tol : ToleranceConfig, optional
    seed : int or Generator, optional

    Returns
    -------
    F : ndarray of shape (K, C(R, K - 1))
        Unit-norm columns.
    report : DiagnosticsReport

    Raises
    ------
    KernelDimMismatchError
        Kernel dimension differs from ``C(R, K - 1)``; ``k_C < K - 1`` or
        the compound Khatri-Rao product is rank deficient.
    WCpdFailedError
        The kernel tensor has no CPD of the expected form; ``k_C = K - 1``.
    """
    T = as_tensor3(T)
    tol = resolve_tol(tol)
    rng = default_rng(seed)
    I, J, K = T.shape
    if K < 2 or K > R:
        raise InvalidDimsError(f"need 2 <= K <= R, got K={K}, R={R}")
    m = R - K + 2
    if m > min(I, J):
        raise InvalidDimsError(f"m = R - K + 2 = {m} exceeds min(I, J) = {min(I, J)}")
    report = DiagnosticsReport(m=m, kernel_dim_expected=binom(R, K - 1))
    t0 = time.perf_counter()
    Tm = build_detecting(T, m, "Tm").body
    report.timings["detecting"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    basis, gap = kernel_basis(Tm, tol_rank=tol.rank)
    d = basis.shape[1]
    report.kernel_dim_found = d
    report.singular_value_gap = gap
    report.timings["kernel"] = time.perf_counter() - t0
    if d != report.kernel_dim_expected:
        report.kc_verdict = KcVerdict.VIOLATED
        raise KernelDimMismatchError(
            f"kernel dimension {d} differs from the expected {report.kernel_dim_expected}: "
            "k_C < K-1 or the compound Khatri-Rao product is rank deficient", report)
    report.kc_verdict = KcVerdict.AT_LEAST_K_MINUS_1
    report.compound_kr_full_rank = True

    t0 = time.perf_counter()
    W = symmetrizer_G(K, m) @ basis
    # modes (F^(m-1), M, F) so that the two full-rank factors come first
    Wt = W.reshape(K, K ** (m - 1), d).transpose(1, 2, 0)
    try:
        inner = cpd_gevd(Wt, d, rng, tol)
    except GEVDError as exc:
        raise WCpdFailedError(f"kernel tensor CPD failed ({exc}); k_C = K-1 suspected",
                              report) from exc
    report.inner_residual = residual(Wt, inner)
    F, worst = refine_normals(inner.C, W, m)
    report.normal_residual = worst
    report.timings["kernel_cpd"] = time.perf_counter() - t0
    if worst > tol.residual:
        raise WCpdFailedError(
            f"kernel is not spanned by symmetric rank-1 terms (distance {worst:.3g}); "
            "k_C = K-1 suspected", report)
    if d > 1 and _min_angle(F) <= tol.collinear:
        raise WCpdFailedError("F has collinear columns; k_C = K-1 suspected", report)
    for name, X in (("F2", inner.A), ("M", inner.B)):
        if numerical_rank(linalg.svdvals(X), tol.rank) < d:
            raise WCpdFailedError(f"{name} is rank deficient; k_C = K-1 suspected", report)
    report.kc_verdict = KcVerdict.EQUALS_K
    return F, report


def phase2_columns_of_C(F, R: int, tol=None, early_stop: bool = False):
    """Columns of ``C`` as common normals of groups of columns of ``F``.

    Every ``(K - 1)``-subset of columns of ``F`` is visited. Its unit normal
    is kept when at least ``C(R - 1, K - 2)`` columns of ``F`` are orthogonal
    to it; collinear survivors are merged.

    Parameters
    ----------
    F : array_like of shape (K, C(R, K - 1))
    R : int
    tol : ToleranceConfig, optional
    early_stop : bool, default=False
        Stop as soon as ``R`` distinct normals are found instead of
        scanning all subsets (which also detects a surplus).

    Returns
    -------
    ndarray of shape (K, R)
        Unit-norm columns with the largest-magnitude entry positive.
    """
    F = as_float_matrix(F, name="F")
    tol = resolve_tol(tol)
    K, N = F.shape
    if K < 2:
        raise InvalidDimsError("F needs at least two rows")
    if N != binom(R, K - 1):
        raise InvalidDimsError(f"F has {N} columns, expected C({R},{K - 1})")
    Fu = _unit_columns(F)
    n_sub = binom(N, K - 1)
    if n_sub > MAX_NORMAL_SUBSETS:
        raise TooLargeError(
            f"{n_sub} column subsets to scan; use the pair-scan algorithm instead")
    need = binom(R - 1, K - 2)
    normals = b_matrix(Fu) if K <= N else np.zeros((K, 0))
    nrm = np.linalg.norm(normals, axis=0)
    keep = nrm > tol.collinear
    X = normals[:, keep] / nrm[keep]
    hits = (np.abs(Fu.T @ X) <= tol.zero).sum(axis=0)
    cand = X[:, hits >= need]
    found = []
    for x in cand.T:
        if any(abs(x @ y) >= 1 - tol.collinear for y in found):
            continue
        found.append(x)
        if len(found) > R:
            raise TooManyColumnsError(
                f"more than {R} non-collinear common normals; F is degenerate")
        if early_stop and len(found) == R:
            break
    if len(found) < R:
        raise NotEnoughColumnsError(f"only {len(found)} of {R} columns of C found")
    return _unit_columns(np.array(found).T)


def _rank1_split(S, I, J, tol):
    A = np.empty((I, S.shape[1]))
    B = np.empty((J, S.shape[1]))
    for r in range(S.shape[1]):
        u, s, vt = np.linalg.svd(S[:, r].reshape(I, J))
        if s[0] == 0 or (s.size > 1 and s[1] > tol.collinear * s[0]):
            raise Rank1SplitFailedError(
                f"column {r} is not rank 1 (s2/s1 = {s[1] / s[0] if s[0] else np.inf:.3g})")
        A[:, r] = u[:, 0] * s[0]
        B[:, r] = vt[0]
    return A, B


def phase3_AB_given_C(T, C, tol=None, seed=None):
    """Given ``C`` (up to column scaling), find ``A`` and ``B``.

    The first ``K`` columns of ``C`` are used to eliminate ``K - 2`` rank-1
    terms from two transformed slices. The remaining ``R - K + 2`` terms are
    found by a GEVD and matched to the known third factor. The eliminated
    terms follow from a subtraction and a pseudo-inverse.

    Returns
    -------
    A : ndarray of shape (I, R)
    B : ndarray of shape (J, R)
        Scaled so that ``T = [A, B, C]`` with the given ``C``.
    """
    T = as_tensor3(T)
    C = as_float_matrix(C, name="C")
    tol = resolve_tol(tol)
    I, J, K = T.shape
    if C.shape[0] != K:
        raise InvalidDimsError(f"C has {C.shape[0]} rows, tensor has K={K}")
    R = C.shape[1]
    if K < 2 or K > R:
        raise InvalidDimsError(f"need 2 <= K <= R, got K={K}, R={R}")
    X = C[:, :K]
    if numerical_rank(linalg.svdvals(X), tol.rank) < K:
        raise AlignmentFailedError("the first K columns of C are linearly dependent")
    M = matricize(T)
    Xinv = linalg.inv(X)
    Z = M @ Xinv.T
    known = [0, 1] + list(range(K, R))
    Ctil = np.hstack([np.eye(2), (Xinv @ C[:, K:])[:2]])
    Ttil = tensorize(Z[:, :2], I, J)
    try:
        sub = cpd_gevd(Ttil, len(known), default_rng(seed), tol)
    except GEVDError as exc:
        raise AlignmentFailedError(f"reduced two-slice CPD failed ({exc})") from exc
    Chat = sub.C
    cos = np.abs(_unit_columns(Chat).T @ _unit_columns(Ctil))
    S = np.empty((I * J, R))
    used = set()
    KR = khatri_rao(sub.A, sub.B)
    for t, r in enumerate(known):
        p = int(np.argmax(cos[:, t]))
        if cos[p, t] < 1 - tol.collinear or p in used:
            raise AlignmentFailedError(
                f"no unique match for reduced third-factor column {t} (|cos| = {cos[p, t]:.3g})")
        used.add(p)
        lam = (Chat[:, p] @ Ctil[:, t]) / (Ctil[:, t] @ Ctil[:, t])
        S[:, r] = lam * KR[:, p]
    rest = list(range(2, K))
    if rest:
        Zr = M - S[:, known] @ C[:, known].T
        S[:, rest] = Zr @ linalg.pinv(C[:, rest].T)
    return _rank1_split(S, I, J, tol)


def _pair_ranks(V, pairs, m, tol):
    """Classify slice pairs: 1 rank m, 0 other rank, -1 ambiguous."""
    Vi = V[:, :, pairs[:, 0]].transpose(2, 0, 1)
    Vj = V[:, :, pairs[:, 1]].transpose(2, 0, 1)
    ok = np.ones(len(pairs), dtype=bool)
    ambiguous = np.zeros(len(pairs), dtype=bool)
    rows = np.arange(len(pairs))
    for stacked in (np.concatenate([Vi, Vj], axis=2),
                    np.concatenate([Vi.transpose(0, 2, 1), Vj.transpose(0, 2, 1)], axis=2)):
        s = np.linalg.svd(stacked, compute_uv=False)
        s0 = np.where(s[:, :1] == 0, 1.0, s[:, :1])
        rel = np.hstack([s / s0, np.zeros((len(pairs), 1))])
        rank = (rel > tol.rank).sum(axis=1)
        ok &= rank == m
        # a decision is trusted only with a clear gap at the cut
        lo = rel[rows, np.maximum(rank - 1, 0)]
        hi = rel[rows, rank]
        with np.errstate(divide="ignore", invalid="ignore"):
            gap = np.where(hi > 0, lo / hi, np.inf)
        ambiguous |= gap < tol.pair_gap
    return np.where(ambiguous, -1, ok.astype(int))


def _cluster(X, thr):
    """Greedy leader clustering of unit columns by ``|cos| >= thr``."""
    labels = -np.ones(X.shape[1], dtype=int)
    leaders = []
    for idx in range(X.shape[1]):
        if labels[idx] >= 0:
            continue
        lab = len(leaders)
        leaders.append(idx)
        free = np.flatnonzero(labels < 0)
        close = free[np.abs(X[:, free].T @ X[:, idx]) >= thr]
        labels[close] = lab
    return labels, len(leaders)


def algo2_find_AB(T, F, R: int, tol=None, seed=None, pair_scan: str = "full", report=None):
    """Find ``A`` and ``B`` from slice pairs of the tensor transformed by ``F``.

    Parameters
    ----------
    T : array_like of shape (I, J, K)
    F : array_like of shape (K, C(R, K - 1))
    R : int
    tol : ToleranceConfig, optional
    seed : int or Generator, optional
    pair_scan : {"full", "cover"}, default="full"
        ``"full"`` solves every admissible pair. ``"cover"`` stops as soon as
        ``R`` distinct rank-1 terms have been collected.
    report : DiagnosticsReport, optional
        Filled with pair and cluster statistics.

    Returns
    -------
    A : ndarray of shape (I, R)
    B : ndarray of shape (J, R)
        Unit-norm columns.
    """
    T = as_tensor3(T)
    F = as_float_matrix(F, name="F")
    tol = resolve_tol(tol)
    rng = default_rng(seed)
    if pair_scan not in ("full", "cover"):
        raise ValueError(f"pair_scan must be 'full' or 'cover', got {pair_scan!r}")
    if report is None:
        report = DiagnosticsReport()
    I, J, K = T.shape
    if F.shape[0] != K:
        raise InvalidDimsError(f"F has {F.shape[0]} rows, tensor has K={K}")
    N = F.shape[1]
    m = R - K + 2
    V = tensorize(matricize(T) @ F, I, J)
    iu, ju = np.triu_indices(N, k=1)
    all_pairs = np.stack([iu, ju], axis=1)
    thr = 1 - tol.collinear
    cols = []
    accepted = []
    ambiguous = 0
    scanned = 0
    done = False
    for start in range(0, len(all_pairs), _PAIR_BATCH):
        batch = all_pairs[start:start + _PAIR_BATCH]
        cls = _pair_ranks(V, batch, m, tol)
        ambiguous += int((cls < 0).sum())
        for (i, j), c in zip(batch, cls):
            scanned += 1
            if c != 1:
                continue
            sub = V[:, :, [i, j]]
            try:
                est = cpd_gevd(sub, m, rng, tol)
            except GEVDError:
                continue
            accepted.append((int(i) + 1, int(j) + 1))
            cols.append(khatri_rao(est.A, est.B))
            if pair_scan == "cover":
                _, n_clusters = _cluster(np.hstack(cols), thr)
                if n_clusters >= R:
                    done = True
                    break
        if done:
            break
    report.pairs_scanned = scanned
    report.pair_count = len(accepted)
    report.ambiguous_pairs = ambiguous
    report.pairs = accepted
    if not accepted:
        raise PairScanEmptyError("no slice pair has the required rank", report)
    X = np.hstack(cols)
    labels, n_clusters = _cluster(X, thr)
    report.cluster_sizes = [int((labels == c).sum()) for c in range(n_clusters)]
    if n_clusters != R:
        raise ClusterCountMismatchError(
            f"{n_clusters} clusters of collinear rank-1 terms, expected {R}", report)
    S = np.empty((I * J, R))
    for c in range(R):
        bundle = X[:, labels == c]
        u = np.linalg.svd(bundle, full_matrices=False)[0][:, 0]
        S[:, c] = u
    A, B = _rank1_split(S, I, J, tol)
    return _unit_columns(A), _unit_columns(B)


def cpd(T, R: int, algorithm: str = "auto", tol=None, seed=None, kc=None,
        pair_scan: str = "full", polish: bool = True):
    """Algebraic CPD of a third-order tensor.

    Parameters
    ----------
    T : array_like of shape (I, J, K)
    R : int
        Rank of the decomposition, at least 2.
    algorithm : {"auto", "alg1", "alg2"}, default="auto"
        ``"auto"`` picks ``"alg2"`` when ``C(R, K' - 1) > 20``.
    tol : ToleranceConfig, dict or float, optional
        A float is read as the residual tolerance.
    seed : int or numpy.random.Generator, optional
    kc : int, optional
        Declared k-rank of the third factor. When smaller than the
        third-mode rank ``K'``, the slices are first replaced by ``kc``
        random mixtures.
    pair_scan : {"full", "cover"}, default="full"
        Pair scan policy of ``"alg2"``.
    polish : bool, default=True
        If the algebraic solution misses ``tol.residual``, refine it by a few
        Levenberg-Marquardt steps before giving up. The report keeps the
        algebraic residual in ``algebraic_residual``.

    Returns
    -------
    cpd : Cpd
        Normalized factors (unit columns in ``A`` and ``B``).
    report : DiagnosticsReport
    """
    T = as_tensor3(T)
    tol = resolve_tol(tol)
    R = check_positive_int(R, "R", minimum=2)
    if algorithm not in ("auto", "alg1", "alg2"):
        raise ValueError(f"algorithm must be auto, alg1 or alg2, got {algorithm!r}")
    rng = default_rng(seed)
    t_start = time.perf_counter()
    T_red, V = reduce_third_mode(T, tol.rank)
    K_red = T_red.shape[2]
    if K_red > R:
        raise InvalidDimsError(f"third-mode rank {K_red} exceeds the requested rank {R}")
    if K_red < 2:
        raise InvalidDimsError("third-mode rank is 1; the CPD is not unique")
    T_work = T_red
    mixed = False
    if kc is not None:
        kc = check_positive_int(kc, "kc", minimum=2)
        if kc < K_red:
            T_work, _ = random_slice_mixture(T_red, kc, rng)
            mixed = True
    K = T_work.shape[2]
    if algorithm == "auto":
        algorithm = "alg2" if binom(R, K - 1) > 20 else "alg1"
    try:
        F, report = phase1_find_F(T_work, R, tol, rng)
    except (KernelDimMismatchError, WCpdFailedError) as exc:
        if exc.report is not None:
            exc.report.K_reduced, exc.report.K_used = K_red, K
            exc.report.algorithm, exc.report.mixture_applied = algorithm, mixed
        raise
    report.K_reduced, report.K_used = K_red, K
    report.algorithm, report.mixture_applied = algorithm, mixed
    t0 = time.perf_counter()
    try:
        if algorithm == "alg1":
            C_work = phase2_columns_of_C(F, R, tol)
            A, B = phase3_AB_given_C(T_work, C_work, tol, rng)
            C = V @ C_work if not mixed else None
        else:
            A, B = algo2_find_AB(T_work, F, R, tol, rng, pair_scan=pair_scan, report=report)
            C = None
    except Exception as exc:
        if hasattr(exc, "report") and exc.report is None:
            exc.report = report
        raise
    if C is None:
        C = linalg.lstsq(khatri_rao(A, B), matricize(T))[0].T
    report.timings["factors"] = time.perf_counter() - t0
    out = normalize_cpd(Cpd(A, B, C))
    report.algebraic_residual = report.residual = residual(T, out)
    if polish and not report.residual <= tol.residual:
        t0 = time.perf_counter()
        out = polish_cpd(T, out)
        report.residual = residual(T, out)
        report.polished = True
        report.timings["polish"] = time.perf_counter() - t0
    report.timings["total"] = time.perf_counter() - t_start
    if not report.residual <= tol.residual:
        raise ResidualTooLargeError(
            f"relative residual {report.residual:.3g} exceeds {tol.residual:g}", report)
    return out, report
