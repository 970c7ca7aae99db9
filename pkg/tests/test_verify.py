import numpy as np
import pytest

from cpdgevd.compound import b_matrix
from cpdgevd.exceptions import BadShapeError, NoBijectionError
from cpdgevd.tensor import Cpd, default_rng
from cpdgevd.verify import check_bc_properties, kruskal_rank, match_factors, nnz_count

C_SMALL = np.array([[1.0, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])


def _random_cpd(seed, dims=(5, 4, 3), R=4):
    g = default_rng(seed)
    return Cpd(*(g.standard_normal((n, R)) for n in dims))


def test_match_identity():
    ref = _random_cpd(0)
    res = match_factors(ref, ref)
    np.testing.assert_array_equal(res.permutation, np.arange(4))
    np.testing.assert_allclose(res.scalings, 1.0)
    assert res.max_column_error <= 1e-15


def test_match_reversed_and_scaled():
    ref = _random_cpd(1)
    rev = slice(None, None, -1)
    est = Cpd(2 * ref.A[:, rev], ref.B[:, rev], 0.5 * ref.C[:, rev])
    res = match_factors(est, ref)
    np.testing.assert_array_equal(res.permutation, [3, 2, 1, 0])
    np.testing.assert_allclose(np.prod(res.scalings, axis=0), 1.0)
    np.testing.assert_allclose(res.scalings[0], 0.5)
    assert res.max_column_error <= 1e-14


def test_match_invariance():
    ref = _random_cpd(2)
    est = Cpd(ref.A + 1e-7, ref.B, ref.C)
    base = match_factors(est, ref).max_column_error
    g = default_rng(3)
    p = g.permutation(4)
    s = g.uniform(0.5, 2, 4) * np.array([1, -1, 1, -1])
    t = g.uniform(0.5, 2, 4)
    moved = Cpd(est.A[:, p] * s, -est.B[:, p] * t, -est.C[:, p] / (s * t))
    assert abs(match_factors(moved, ref).max_column_error - base) <= 1e-12


def test_match_unrelated_fails_symmetric():
    a, b = _random_cpd(4), _random_cpd(5)
    with pytest.raises(NoBijectionError):
        match_factors(a, b)
    with pytest.raises(NoBijectionError):
        match_factors(b, a)
    match_factors(a, a)


def test_match_shape_mismatch():
    with pytest.raises(BadShapeError):
        match_factors(_random_cpd(0), _random_cpd(0, R=3))


def test_nnz_count():
    assert nnz_count([0, 0, 0]) == 0
    assert nnz_count([1, 0, 2]) == 2
    Bc = b_matrix(C_SMALL)
    for x in C_SMALL.T:
        assert nnz_count(x @ Bc) == 3


def test_bc_small_example():
    Bc = b_matrix(C_SMALL)
    printed = np.array([[0, 0, 0, 1, 1, -1], [0, -1, -1, 0, 0, 1], [1, 0, 1, 0, -1, 0]])
    np.testing.assert_array_equal(Bc, printed)
    rep = check_bc_properties(C_SMALL)
    assert rep.ok, rep.violations
    assert len(rep.dependent_subsets) == 4
    assert all(len(s) == 3 for s in rep.dependent_subsets)
    for s in rep.dependent_subsets:
        assert np.linalg.matrix_rank(Bc[:, [i - 1 for i in s]]) == 2


def test_bc_random():
    C = default_rng(8).standard_normal((4, 6))
    assert check_bc_properties(C).ok


def test_bc_degenerate():
    C = default_rng(9).standard_normal((3, 4))
    C[:, 1] = C[:, 0]
    rep = check_bc_properties(C)
    assert not rep.p1 and not rep.ok
    assert any(v.startswith("P1") for v in rep.violations)


def test_kruskal_rank():
    assert kruskal_rank(C_SMALL) == 3
    C = C_SMALL.copy()
    C[:, 3] = C[:, 0]
    assert kruskal_rank(C) == 1
