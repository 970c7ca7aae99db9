"""Third-order tensors, CPD composition and mode-3 preprocessing.

A tensor is a float array of shape ``(I, J, K)``; the frontal slice ``T_k``
is ``T[:, :, k]``. The matricization used throughout is the ``IJ x K``
matrix whose column ``k`` is ``vec(T_k^T)``, i.e. row ``i * J + j`` holds
``t_ijk``. With this layout ``matricize([A, B, C]) = khatri_rao(A, B) @ C.T``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ._validation import as_float_matrix, as_tensor3, check_same_columns
from .compound import khatri_rao
from .exceptions import BadShapeError


@dataclass(frozen=True)
class Cpd:
    """Factor matrices ``A (I x R)``, ``B (J x R)``, ``C (K x R)``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        A = as_float_matrix(self.A, name="A")
        B = as_float_matrix(self.B, name="B")
        C = as_float_matrix(self.C, name="C")
        try:
            check_same_columns(A, B, C)
        except ValueError as exc:
            raise BadShapeError(str(exc)) from exc
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @property
    def rank(self) -> int:
        return self.A.shape[1]

    @property
    def dims(self):
        return (self.A.shape[0], self.B.shape[0], self.C.shape[0])

    def permute(self, perm):
        perm = np.asarray(perm)
        return Cpd(self.A[:, perm], self.B[:, perm], self.C[:, perm])

    def to_tensor(self):
        return compose(self)


def matricize(T) -> np.ndarray:
    """``IJ x K`` unfolding with column ``k`` equal to ``vec(T_k^T)``."""
    T = as_tensor3(T)
    I, J, K = T.shape
    return T.reshape(I * J, K).copy()


def tensorize(X, I: int, J: int) -> np.ndarray:
    """Inverse of :func:`matricize`."""
    X = as_float_matrix(X, name="X")
    if X.shape[0] != I * J:
        raise BadShapeError(f"row count {X.shape[0]} differs from I*J={I * J}")
    return X.reshape(I, J, X.shape[1]).copy()


def frontal_slice(T, k: int) -> np.ndarray:
    """Frontal slice ``T_k`` (0-based ``k``)."""
    T = as_tensor3(T)
    if not 0 <= k < T.shape[2]:
        raise BadShapeError(f"slice index {k} outside 0..{T.shape[2] - 1}")
    return T[:, :, k].copy()


def compose(cpd: Cpd) -> np.ndarray:
    """Full tensor ``sum_r a_r o b_r o c_r``."""
    return np.einsum("ir,jr,kr->ijk", cpd.A, cpd.B, cpd.C)


def residual(T, cpd: Cpd) -> float:
    """Relative Frobenius error ``||T - [A, B, C]|| / ||T||``."""
    T = as_tensor3(T)
    if T.shape != cpd.dims:
        raise BadShapeError(f"tensor shape {T.shape} differs from factor dims {cpd.dims}")
    nrm = np.linalg.norm(T)
    err = np.linalg.norm(T - compose(cpd))
    return float(err / nrm) if nrm > 0 else float(err)


def numerical_rank(s, tol: float) -> int:
    """Number of singular values ``s_i > tol * s_1``."""
    s = np.asarray(s)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def reduce_third_mode(T, tol_rank: float = 1e-9):
    """Compress the third mode onto the row space of the unfolding.

    Returns
    -------
    T_red : ndarray of shape (I, J, K')
        ``matricize(T_red) == matricize(T) @ V``.
    V : ndarray of shape (K, K')
        Orthonormal basis, so a third factor ``C_red`` of ``T_red`` lifts to
        ``V @ C_red``.
    """
    T = as_tensor3(T)
    I, J, K = T.shape
    M = matricize(T)
    _, s, Vt = linalg.svd(M, full_matrices=False)
    r = max(1, numerical_rank(s, tol_rank))
    V = Vt[:r].T
    return tensorize(M @ V, I, J), V


def default_rng(seed):
    """Seeded PCG64 generator; normal variates come from ``standard_normal``."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def random_slice_mixture(T, K_target: int, rng_seed=None, X=None):
    """Replace the frontal slices by ``K_target`` random linear mixtures.

    Parameters
    ----------
    T : array_like of shape (I, J, K)
    K_target : int
        Number of mixtures, at most ``K``.
    rng_seed : int or Generator, optional
    X : array_like of shape (K_target, K), optional
        Mixing matrix to use instead of a random draw.

    Returns
    -------
    T_bar : ndarray of shape (I, J, K_target)
    X : ndarray of shape (K_target, K)
    """
    T = as_tensor3(T)
    I, J, K = T.shape
    if not 1 <= K_target <= K:
        raise BadShapeError(f"K_target={K_target} must lie in 1..{K}")
    if X is None:
        X = default_rng(rng_seed).standard_normal((K_target, K))
    else:
        X = as_float_matrix(X, name="X")
        if X.shape != (K_target, K):
            raise BadShapeError(f"mixing matrix must be {K_target}x{K}, got {X.shape}")
    return tensorize(matricize(T) @ X.T, I, J), X


def normalize_cpd(cpd: Cpd) -> Cpd:
    """Unit-norm columns in ``A`` and ``B`` with the largest entry positive.

    The removed scale and sign go into ``C``.
    """
    A, B, C = cpd.A.copy(), cpd.B.copy(), cpd.C.copy()
    for M in (A, B):
        nrm = np.linalg.norm(M, axis=0)
        nrm[nrm == 0] = 1.0
        idx = np.argmax(np.abs(M), axis=0)
        sign = np.sign(M[idx, np.arange(M.shape[1])])
        sign[sign == 0] = 1.0
        scale = nrm * sign
        M /= scale
        C *= scale
    return Cpd(A, B, C)


def polish_cpd(T, cpd: Cpd, max_nfev: int = 50) -> Cpd:
    """Levenberg-Marquardt refinement of a CPD that is already close.

    Only meant to remove the rounding error of an algebraic solution on
    ill-conditioned instances; it does not rescue a wrong starting point.
    """
    from scipy.optimize import least_squares

    T = as_tensor3(T)
    I, J, K = T.shape
    R = cpd.rank
    sizes = (I * R, J * R, K * R)

    def unpack(x):
        a, b, c = np.split(x, np.cumsum(sizes)[:2])
        return a.reshape(I, R), b.reshape(J, R), c.reshape(K, R)

    def fun(x):
        A, B, C = unpack(x)
        return (np.einsum("ir,jr,kr->ijk", A, B, C) - T).ravel()

    def jac(x):
        A, B, C = unpack(x)
        JA = np.einsum("ip,jr,kr->ijkpr", np.eye(I), B, C).reshape(-1, I * R)
        JB = np.einsum("ir,jp,kr->ijkpr", A, np.eye(J), C).reshape(-1, J * R)
        JC = np.einsum("ir,jr,kp->ijkpr", A, B, np.eye(K)).reshape(-1, K * R)
        return np.hstack([JA, JB, JC])

    x0 = np.concatenate([cpd.A.ravel(), cpd.B.ravel(), cpd.C.ravel()])
    # "lm" needs at least as many residuals as unknowns
    method = "lm" if T.size >= x0.size else "trf"
    sol = least_squares(fun, x0, jac=jac, method=method, max_nfev=max_nfev,
                        xtol=1e-15, ftol=1e-15, gtol=1e-15)
    out = Cpd(*unpack(sol.x))
    return normalize_cpd(out) if residual(T, out) < residual(T, cpd) else cpd
