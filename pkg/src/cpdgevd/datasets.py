"""Small reference problem with exactly known intermediate quantities.

The 4 x 4 x 4 tensor of rank 5 below has integer factors. All of its
intermediate objects (detecting matrix, kernel basis, the normals matrix
``F``, the useful slice pairs) are known in closed form, which makes it a
convenient regression target.
"""
import numpy as np
from sklearn.utils import Bunch

_A = [[1, 1, 0, 0, 0], [1, 0, 1, 0, 0], [1, 0, 0, 1, 0], [0, 0, 0, 0, 1]]
_B = [[1, 0, 0, 0, 1], [1, 0, 0, 1, 0], [1, 0, 1, 0, 0], [0, 1, 0, 0, 0]]
_C = [[1, 1, 0, 0, 0], [1, 0, 2, 0, 0], [1, 0, 0, 3, 0], [1, 0, 0, 0, 1]]

_T1 = [[1, 1, 1, 1], [1, 1, 1, 0], [1, 1, 1, 0], [0, 0, 0, 0]]
_T2 = [[1, 1, 1, 0], [1, 1, 1, 0], [1, 4, 1, 0], [0, 0, 0, 0]]
_T4 = [[1, 1, 1, 0], [1, 1, 3, 0], [1, 1, 1, 0], [0, 0, 0, 0]]

_PHI_123 = [[0, 3, 0, -3], [0, -1, -1, 0], [-3, -4, -1, 0], [-3, 0, 0, 0]]

_F = [[1, -1, 0, -1, 0, 0, 0, -1, 0, 0],
      [0, 1, 0, 0, -1, 1, 0, 0, 0, -1],
      [0, 0, 0, 1, 0, -1, -1, 0, -1, 0],
      [1, 0, 1, 0, 0, 0, 0, 0, 1, 1]]

# detecting matrix of order 3 (16 x 20), stored negated
_NEG_T3 = """
0 0 0 0 0 0 6 0 0 0 0 0 12 0 6 12 0 0 0 0
0 0 0 0 0 0 0 0 2 0 0 0 0 0 -2 0 0 -4 -4 0
0 0 0 0 0 3 0 0 0 0 0 -6 0 -6 3 0 0 0 0 0
0 0 0 0 0 3 0 0 2 0 0 6 0 6 11 0 0 4 4 0
0 -6 0 0 -6 -3 -3 0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 2 0 0 1 0 2 1 0 0 0 0 0 0 0 0 0 0 0
0 0 2 0 0 4 0 2 1 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 4 0 0 2 0 2 4 0 0 0 0 0 0 0 0 0 0
0 0 2 0 0 1 0 2 3 0 0 0 0 0 0 0 0 0 0 0
0 0 2 0 0 1 0 2 1 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
0 6 0 4 6 3 11 0 2 4 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0
"""

# 1-based slice pairs of the transformed tensor whose pencil has rank 3
_PAIRS = [(1, 2), (1, 3), (1, 4), (1, 8), (1, 9), (1, 10), (2, 4), (2, 5), (2, 6),
          (2, 8), (2, 10), (3, 5), (3, 7), (3, 8), (3, 9), (3, 10), (4, 6), (4, 7),
          (4, 8), (4, 9), (5, 6), (5, 7), (5, 8), (5, 10), (6, 7), (6, 9), (6, 10),
          (7, 8), (7, 9), (9, 10)]

# 1-based columns of F that are orthogonal to a common column of C
_DEPENDENT_SUBSETS = [(1, 2, 3, 5, 8, 10), (1, 2, 4, 6, 9, 10), (1, 3, 4, 7, 8, 9),
                      (2, 4, 5, 6, 7, 8), (3, 5, 6, 7, 9, 10)]


def _kernel_basis():
    W = np.zeros((20, 10))
    singles = [1, 11, 17, 20]
    diffs = [(2, 5), (4, 10), (3, 8), (13, 16), (12, 14), (18, 19)]
    for c, i in enumerate(singles):
        W[i - 1, c] = 1.0
    for c, (i, j) in enumerate(diffs, start=len(singles)):
        W[i - 1, c] = 1.0
        W[j - 1, c] = -1.0
    return W


def load_rank5_benchmark():
    """Return the reference rank-5 problem as a :class:`sklearn.utils.Bunch`.

    Keys
    ----
    A, B, C : factor matrices (4 x 5 each)
    tensor : 4 x 4 x 4 array composed from the factors
    slices : the four frontal slices
    phi_123 : polarized compound of slices 1, 2, 3
    detecting_3 : order-3 detecting matrix (16 x 20)
    kernel_basis : basis of its kernel (20 x 10)
    F : normals matrix (4 x 10), equal to ``B(C)`` up to column permutation and scaling
    c_hat : unit-norm columns of C in the order they are found from F
    pairs : the 30 useful slice pairs (1-based)
    dependent_subsets : the 5 column subsets of F orthogonal to a column of C
    """
    A = np.array(_A, dtype=float)
    B = np.array(_B, dtype=float)
    C = np.array(_C, dtype=float)
    T = np.einsum("ir,jr,kr->ijk", A, B, C)
    slices = [np.array(S, dtype=float) for S in (_T1, _T2, np.transpose(_T1), _T4)]
    c_hat = np.array([[0, 0, 1, 0], [.5, .5, .5, .5], [0, 1, 0, 0], [0, 0, 0, 1], [1, 0, 0, 0]]).T
    return Bunch(
        A=A, B=B, C=C, tensor=T, slices=slices,
        phi_123=np.array(_PHI_123, dtype=float),
        detecting_3=-np.array(_NEG_T3.split(), dtype=float).reshape(16, 20),
        kernel_basis=_kernel_basis(),
        F=np.array(_F, dtype=float),
        c_hat=c_hat,
        pairs=list(_PAIRS),
        dependent_subsets=list(_DEPENDENT_SUBSETS),
    )


def structured_factor(K: int, R: int, kc=None, rng_seed=None):
    """Standard-normal ``K x R`` matrix, optionally with k-rank exactly ``kc``.

    Columns ``1..kc`` are random and column ``kc + 1`` is a random
    combination of them with nonzero weights, so the first ``kc + 1``
    columns are dependent while any ``kc`` columns generically are not.

    Raises
    ------
    ValueError
        If ``kc`` is outside ``1..min(K, R)``.
    """
    from .tensor import default_rng

    rng = default_rng(rng_seed)
    X = rng.standard_normal((K, R))
    if kc is None or kc == min(K, R):
        return X
    kc = int(kc)
    if not 1 <= kc < min(K, R):
        raise ValueError(f"k-rank {kc} is not attainable for a {K} x {R} matrix")
    w = rng.uniform(0.5, 1.5, kc) * rng.choice([-1.0, 1.0], kc)
    X[:, kc] = X[:, :kc] @ w
    return X


def make_random_cpd(dims, R: int, kc=None, rng_seed=None):
    """Seeded random CPD problem with standard-normal factors.

    Parameters
    ----------
    dims : tuple of int
        ``(I, J, K)``.
    R : int
    kc : int, optional
        Prescribed k-rank of the third factor (see :func:`structured_factor`).
    rng_seed : int or numpy.random.Generator, optional

    Returns
    -------
    Bunch
        ``tensor`` and the ground truth ``cpd``.
    """
    from .tensor import Cpd, compose, default_rng

    I, J, K = (int(d) for d in dims)
    rng = default_rng(rng_seed)
    A = rng.standard_normal((I, R))
    B = rng.standard_normal((J, R))
    C = structured_factor(K, R, kc, rng)
    truth = Cpd(A, B, C)
    return Bunch(tensor=compose(truth), cpd=truth)
