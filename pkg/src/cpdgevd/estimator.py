"""Scikit-learn style wrapper around :func:`cpdgevd.cpdalg.cpd`."""
from __future__ import annotations

import numpy as np
from scipy import linalg
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import as_float_matrix, as_tensor3
from .compound import khatri_rao
from .cpdalg import cpd
from .exceptions import BadShapeError
from .tensor import matricize, residual, tensorize


class AlgebraicCPD(TransformerMixin, BaseEstimator):
    """Exact algebraic canonical polyadic decomposition of a 3-way tensor.

    The tensor is written as ``T = sum_r a_r o b_r o c_r``. Fitting recovers
    the factors without iterative optimization, through the null space of a
    detecting matrix built from the frontal slices and a generalized
    eigenvalue problem.

    Parameters
    ----------
    rank : int, default=2
        Number of rank-1 terms ``R``.
    algorithm : {"auto", "alg1", "alg2"}, default="auto"
        ``"alg1"`` extracts the third factor by subset search, ``"alg2"``
        works from slice pairs and scales better with ``R``.
    kc : int, optional
        Declared k-rank of the third factor, used when it is smaller than
        its rank.
    tol : ToleranceConfig, dict or float, optional
        Numerical thresholds; a float sets the residual tolerance.
    random_state : int or numpy.random.Generator, optional
        Seed for the random slice mixtures.
    pair_scan : {"full", "cover"}, default="full"
    polish : bool, default=True
        Refine solutions whose algebraic residual misses the tolerance.

    Attributes
    ----------
    factors_ : Cpd
        Fitted factors; ``A`` and ``B`` have unit columns.
    components_ : ndarray of shape (R, I * J)
        Vectorized rank-1 slice patterns ``a_r b_r^T``.
    diagnostics_ : DiagnosticsReport
    residual_ : float
        Relative residual of the fit.

    Examples
    --------
    >>> from cpdgevd import AlgebraicCPD, load_rank5_benchmark
    >>> data = load_rank5_benchmark()
    >>> est = AlgebraicCPD(rank=5, random_state=0).fit(data.tensor)
    >>> est.residual_ < 1e-10
    True
    """

    def __init__(self, rank=2, algorithm="auto", kc=None, tol=None, random_state=None,
                 pair_scan="full", polish=True):
        self.rank = rank
        self.algorithm = algorithm
        self.kc = kc
        self.tol = tol
        self.random_state = random_state
        self.pair_scan = pair_scan
        self.polish = polish

    def fit(self, X, y=None):
        """Decompose the tensor ``X`` of shape (I, J, K)."""
        X = as_tensor3(X, name="X")
        factors, report = cpd(X, self.rank, self.algorithm, tol=self.tol,
                              seed=self.random_state, kc=self.kc,
                              pair_scan=self.pair_scan, polish=self.polish)
        self.factors_ = factors
        self.diagnostics_ = report
        self.residual_ = report.residual
        self.components_ = khatri_rao(factors.A, factors.B).T
        self.n_features_in_ = X.shape[0] * X.shape[1]
        return self

    def _check_slices(self, X):
        check_is_fitted(self)
        X = as_tensor3(X, name="X")
        I, J = self.factors_.A.shape[0], self.factors_.B.shape[0]
        if X.shape[:2] != (I, J):
            raise BadShapeError(f"expected slices of shape {(I, J)}, got {X.shape[:2]}")
        return X

    def transform(self, X):
        """Coefficients of each frontal slice of ``X`` on the fitted terms.

        Returns
        -------
        ndarray of shape (K, R)
            For the training tensor this is the third factor ``C``.
        """
        X = self._check_slices(X)
        return linalg.lstsq(self.components_.T, matricize(X))[0].T

    def inverse_transform(self, X):
        """Tensor with third factor ``X`` of shape (K, R)."""
        check_is_fitted(self)
        X = as_float_matrix(X, name="X")
        if X.shape[1] != self.factors_.rank:
            raise BadShapeError(f"expected {self.factors_.rank} columns, got {X.shape[1]}")
        I, J = self.factors_.A.shape[0], self.factors_.B.shape[0]
        return tensorize(self.components_.T @ X.T, I, J)

    def score(self, X, y=None):
        """Negative relative residual of ``X`` against its projection."""
        X = self._check_slices(X)
        recon = self.inverse_transform(self.transform(X))
        nrm = np.linalg.norm(X)
        return -float(np.linalg.norm(X - recon) / (nrm if nrm else 1.0))

    def reconstruction_error(self, X):
        """Relative residual of the fitted factors on ``X``."""
        check_is_fitted(self)
        return residual(as_tensor3(X, name="X"), self.factors_)
