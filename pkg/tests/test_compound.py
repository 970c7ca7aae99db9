import itertools
import math

import numpy as np
import pytest

from cpdgevd.compound import (b_matrix, compound, diag_compound_vector, k_rank, khatri_rao,
                              khatri_rao_power, mirror_L, naive_permanent, permanent,
                              permanental_compound, q_matrix, r_matrix, selector_H,
                              sym_project, symmetrizer_G)
from cpdgevd.exceptions import BadLengthError, ColumnMismatchError, InvalidDimsError, TooLargeError

C_SMALL = np.array([[1.0, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])
C_23 = np.array([[1.0, 2, 3], [4, 5, 6]])


def test_compound_of_identity_with_column():
    a = np.array([1.0, 2.0, 3.0])
    A = np.hstack([np.eye(3), a[:, None]])
    a1, a2, a3 = a
    expected = [[1, 0, a2, 0, -a1, 0], [0, 1, a3, 0, 0, -a1], [0, 0, 0, 1, a3, -a2]]
    np.testing.assert_allclose(compound(A, 2), expected, atol=1e-12)


def test_compound_identity():
    np.testing.assert_array_equal(compound(np.eye(5), 3), np.eye(10))


def test_compound_entries_by_brute_force(rng):
    A = rng.standard_normal((5, 4))
    C2 = compound(A, 2)
    for i, r in enumerate(itertools.combinations(range(5), 2)):
        for j, c in enumerate(itertools.combinations(range(4), 2)):
            assert C2[i, j] == pytest.approx(np.linalg.det(A[np.ix_(r, c)]), abs=1e-12)


def test_compound_invalid_order(rng):
    with pytest.raises(InvalidDimsError):
        compound(rng.standard_normal((3, 2)), 3)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_binet_cauchy(rng, k):
    A, B = rng.standard_normal((6, 4)), rng.standard_normal((5, 4))
    np.testing.assert_allclose(compound(A @ B.T, k), compound(A, k) @ compound(B.T, k),
                               rtol=1e-10, atol=1e-10)
    np.testing.assert_allclose(compound(A.T, k), compound(A, k).T, atol=1e-14)


def test_permanent_values():
    assert permanent([[1, 2], [3, 4]]) == 10
    assert permanent([[1, 2], [4, 5]]) == 13
    assert permanent(np.eye(6)) == 1
    assert isinstance(permanent([[1, 2], [3, 4]]), int)


def test_permanent_matches_naive(rng):
    for n in range(1, 7):
        M = rng.standard_normal((n, n))
        assert permanent(M) == pytest.approx(naive_permanent(M), rel=1e-12, abs=1e-12)
        Mi = rng.integers(-5, 6, (n, n))
        assert permanent(Mi) == naive_permanent(Mi)


def test_permanent_cap():
    with pytest.raises(TooLargeError):
        permanent(np.ones((21, 21)))


def test_permanental_compound():
    np.testing.assert_array_equal(permanental_compound(C_23, 1), C_23)
    np.testing.assert_array_equal(permanental_compound(C_23, 2), [[13, 18, 27]])


def test_permanental_compound_brute_force(rng):
    C = rng.integers(-4, 5, (4, 4)).astype(float)
    P = permanental_compound(C, 2)
    for i, r in enumerate(itertools.combinations(range(4), 2)):
        for j, c in enumerate(itertools.combinations(range(4), 2)):
            assert P[i, j] == naive_permanent(C[np.ix_(r, c)])


def test_r_and_q_matrices():
    R2 = r_matrix(C_23, 2)
    np.testing.assert_array_equal(R2, [[4, 6, 12], [13, 18, 27], [13, 18, 27], [40, 48, 60]])
    np.testing.assert_array_equal(q_matrix(C_23, 2), np.delete(R2, 2, axis=0))


def test_r_matrix_by_symmetrization():
    cols = []
    for i, j in itertools.combinations(range(3), 2):
        v = np.kron(C_23[:, i], C_23[:, j])
        cols.append(2 * sym_project(v, 2))
    np.testing.assert_allclose(np.array(cols), [[4, 13, 13, 40], [6, 18, 18, 48], [12, 27, 27, 60]])


def test_symmetrizer_small():
    np.testing.assert_array_equal(symmetrizer_G(2, 2),
                                  [[1, 0, 0], [0, .5, 0], [0, .5, 0], [0, 0, 1]])
    np.testing.assert_array_equal(symmetrizer_G(3, 1), np.eye(3))
    np.testing.assert_array_equal(selector_H(3, 1), np.eye(3))


@pytest.mark.parametrize("K,m", [(2, 2), (3, 2), (4, 3)])
def test_h_g_identity(K, m):
    G, H = symmetrizer_G(K, m), selector_H(K, m)
    np.testing.assert_allclose(H @ G, np.eye(math.comb(K + m - 1, m)))


def test_g_h_relations(rng):
    C = rng.standard_normal((3, 5))
    for m in (2, 3):
        Rm, Qm = r_matrix(C, m), q_matrix(C, m)
        np.testing.assert_allclose(Rm.T @ symmetrizer_G(3, m), Qm.T, atol=1e-12)
        np.testing.assert_allclose(Rm.T, Qm.T @ selector_H(3, m), atol=1e-12)


def test_sym_project(rng):
    v = rng.standard_normal(27)
    p = sym_project(v, 3)
    np.testing.assert_allclose(sym_project(p, 3), p, atol=1e-15)
    x = rng.standard_normal(4)
    np.testing.assert_allclose(sym_project(np.kron(x, x), 2), np.kron(x, x), atol=1e-15)
    np.testing.assert_array_equal(sym_project([0.0, 1.0, 0.0, 0.0], 2), [0, .5, .5, 0])
    with pytest.raises(BadLengthError):
        sym_project(np.ones(5), 2)


def test_b_matrix_example():
    np.testing.assert_array_equal(mirror_L(3), [[0, 0, 1], [0, -1, 0], [1, 0, 0]])
    np.testing.assert_array_equal(b_matrix(C_SMALL),
                                  [[0, 0, 0, 1, 1, -1], [0, -1, -1, 0, 0, 1], [1, 0, 1, 0, -1, 0]])


def test_b_matrix_square(rng):
    C = rng.standard_normal((4, 4))
    np.testing.assert_allclose(C.T @ b_matrix(C), np.linalg.det(C) * mirror_L(4), atol=1e-12)


def test_b_matrix_orthogonality(rng):
    C = rng.standard_normal((3, 5))
    Bc = b_matrix(C)
    for s, sub in enumerate(itertools.combinations(range(5), 2)):
        for r in sub:
            dot = C[:, r] @ Bc[:, s]
            assert abs(dot) <= 1e-10 * np.linalg.norm(C[:, r]) * np.linalg.norm(Bc[:, s])


def test_b_matrix_dims(rng):
    with pytest.raises(InvalidDimsError):
        b_matrix(rng.standard_normal((4, 3)))
    with pytest.raises(InvalidDimsError):
        b_matrix(rng.standard_normal((1, 3)))


def test_khatri_rao(rng):
    np.testing.assert_array_equal(khatri_rao(np.eye(2), np.eye(2)), [[1, 0], [0, 0], [0, 0], [0, 1]])
    A, B, d = rng.standard_normal((3, 2)), rng.standard_normal((3, 2)), rng.standard_normal(2)
    np.testing.assert_allclose((A @ np.diag(d) @ B.T).ravel(order="F"), khatri_rao(B, A) @ d)
    F = rng.standard_normal((3, 4))
    assert khatri_rao_power(F, 2).shape == (9, 4)
    np.testing.assert_allclose(khatri_rao_power(F, 2), khatri_rao(F, F))
    with pytest.raises(ColumnMismatchError):
        khatri_rao(np.ones((2, 2)), np.ones((2, 3)))


def test_diag_compound_vector():
    np.testing.assert_array_equal(diag_compound_vector([1, 2, 3], 2), [2, 3, 6])
    np.testing.assert_array_equal(diag_compound_vector([1, 0, 0], 2), [0, 0, 0])
    np.testing.assert_array_equal(diag_compound_vector(np.ones(5), 3), np.ones(10))
    with pytest.raises(InvalidDimsError):
        diag_compound_vector([1, 2], 3)


def test_diag_compound_is_compound_of_diag(rng):
    d = rng.standard_normal(5)
    np.testing.assert_allclose(compound(np.diag(d), 3), np.diag(diag_compound_vector(d, 3)),
                               atol=1e-14)


def test_compound_zero_columns_and_k_rank(rng):
    X = rng.standard_normal((5, 6))
    X[:, 3] = X[:, 0] + X[:, 1] - X[:, 2]
    assert k_rank(X) == 3
    assert np.any(np.all(np.abs(compound(X, 4)) < 1e-10, axis=0))
    assert not np.any(np.all(np.abs(compound(X, 3)) < 1e-10, axis=0))
    L = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 6))
    assert np.abs(compound(L, 3)).max() < 1e-10
