"""CPD by generalized eigenvalue decomposition of a two-slice pencil.

If ``T = [A, B, C]_R`` with ``A`` and ``B`` of full column rank and no two
collinear columns in ``C``, two random mixtures of the frontal slices
``Y_1 = A Diag(C^T x) B^T`` and ``Y_2 = A Diag(C^T y) B^T`` form a pencil
whose eigenvectors reveal ``A``.
"""
from __future__ import annotations

import numpy as np
from scipy import linalg

from ._validation import as_tensor3
from .compound import khatri_rao
from .exceptions import (ComplexEigenvaluesError, DegeneratePencilError,
                         EigenvalueCollisionError, InvalidDimsError, RankMismatchError)
from .tensor import Cpd, default_rng, matricize, normalize_cpd, numerical_rank
from .tolerance import resolve_tol

_MAX_SEEDS = 3


def _mode_basis(M, R, tol, mode):
    U, s, _ = linalg.svd(M, full_matrices=False)
    r = numerical_rank(s, tol.rank)
    if r != R:
        raise RankMismatchError(f"mode-{mode} unfolding has numerical rank {r}, expected {R}")
    return U[:, :R]


def _unit(rng, K):
    v = rng.standard_normal(K)
    return v / np.linalg.norm(v)


def _pencil_eigvecs(core, rng, tol):
    R = core.shape[0]
    scale = np.linalg.norm(core)
    collisions = 0
    singular = 0
    while True:
        Y1 = core @ _unit(rng, core.shape[2])
        Y2 = core @ _unit(rng, core.shape[2])
        s2 = linalg.svdvals(Y2)
        if s2[-1] <= tol.rank * scale:
            singular += 1
            if singular >= _MAX_SEEDS:
                raise DegeneratePencilError(
                    f"second pencil matrix singular for {_MAX_SEEDS} mixtures")
            continue
        lam, V = linalg.eig(Y1, Y2)
        lam_abs = np.abs(lam)
        if np.any(np.abs(lam.imag) > tol.imag * (1.0 + lam_abs)):
            raise ComplexEigenvaluesError(
                f"max |Im l| = {np.max(np.abs(lam.imag)):.3g}; preconditions violated")
        lr = np.sort(lam.real)
        gaps = np.diff(lr) / (1.0 + np.max(np.abs(lr)))
        if R > 1 and gaps.min() <= tol.sep:
            collisions += 1
            if collisions > 1:
                raise EigenvalueCollisionError(
                    f"eigenvalues closer than {tol.sep:g} for two mixtures")
            continue
        return Y2, V.real


def cpd_gevd(T, R: int, rng_seed=None, tol=None) -> Cpd:
    """CPD of a tensor whose first two factors have full column rank.

    Parameters
    ----------
    T : array_like of shape (I, J, K)
    R : int
        Rank, at most ``min(I, J)``.
    rng_seed : int or numpy.random.Generator, optional
        Seed for the slice mixtures.
    tol : ToleranceConfig, optional

    Returns
    -------
    Cpd
        Columns of ``A`` and ``B`` have unit norm with the largest-magnitude
        entry positive; ``C`` carries the scale. Column order is arbitrary.

    Raises
    ------
    RankMismatchError
        If the mode-1 or mode-2 unfolding does not have rank ``R``.
    ComplexEigenvaluesError, EigenvalueCollisionError, DegeneratePencilError
        If the pencil does not have ``R`` distinct real eigenvalues.
    """
    T = as_tensor3(T)
    tol = resolve_tol(tol)
    I, J, K = T.shape
    if not 1 <= R <= min(I, J):
        raise InvalidDimsError(f"rank R={R} must lie in 1..min(I, J)={min(I, J)}")
    rng = default_rng(rng_seed)
    U = _mode_basis(T.reshape(I, J * K), R, tol, 1)
    W = _mode_basis(T.transpose(1, 0, 2).reshape(J, I * K), R, tol, 2)
    core = np.einsum("ijk,ir,js->rsk", T, U, W, optimize=True)
    if R == 1:
        A = U
    else:
        Y2, V = _pencil_eigvecs(core, rng, tol)
        A = U @ (Y2 @ V)
    # row r of pinv(A) T_k is c_kr b_r^T
    P = np.einsum("ri,ijk->rkj", linalg.pinv(A), T, optimize=True)
    _, _, Vt = np.linalg.svd(P)
    B = Vt[:, 0, :].T
    C = linalg.lstsq(khatri_rao(A, B), matricize(T))[0].T
    return normalize_cpd(Cpd(A, B, C))
