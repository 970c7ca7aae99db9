import itertools
import math

import numpy as np
import pytest

from cpdgevd.compound import (compound, khatri_rao, naive_permanent, permanental_compound,
                              q_matrix, r_matrix, symmetrizer_G)
from cpdgevd.exceptions import InvalidDimsError
from cpdgevd.multiindex import Kind, enumerate_family, sort_tuple
from cpdgevd.polarize import build_detecting, mixed_discriminant, polarized_compound
from cpdgevd.tensor import Cpd, compose


def test_mixed_discriminant_values(rng):
    assert mixed_discriminant([np.eye(2), np.eye(2)]) == pytest.approx(2.0)
    assert mixed_discriminant([np.diag([1.0, 2.0]), np.diag([3.0, 4.0])]) == pytest.approx(10.0)
    for _ in range(5):
        D = rng.standard_normal((3, 3))
        val = mixed_discriminant([np.diag(D[:, t]) for t in range(3)])
        assert val == pytest.approx(naive_permanent(D), rel=1e-10, abs=1e-12)


def test_mixed_discriminant_bad_shape():
    with pytest.raises(InvalidDimsError):
        mixed_discriminant([np.eye(3), np.eye(3)])


def test_mixed_discriminant_symmetric_multilinear(rng):
    S = [rng.standard_normal((3, 3)) for _ in range(3)]
    base = mixed_discriminant(S)
    for perm in itertools.permutations(range(3)):
        assert mixed_discriminant([S[p] for p in perm]) == pytest.approx(base, rel=1e-9)
    X = rng.standard_normal((3, 3))
    a, b = 1.7, -0.4
    lhs = mixed_discriminant([a * S[0] + b * X, S[1], S[2]])
    rhs = a * base + b * mixed_discriminant([X, S[1], S[2]])
    assert lhs == pytest.approx(rhs, rel=1e-9)


def test_polarized_compound_printed(bench):
    phi = polarized_compound(bench.slices[:3])
    np.testing.assert_allclose(phi, bench.phi_123, atol=1e-12)
    np.testing.assert_allclose(bench.phi_123, -np.array(
        [[0, -3, 0, 3], [0, 1, 1, 0], [3, 4, 1, 0], [3, 0, 0, 0]]))


@pytest.mark.parametrize("m", [2, 3])
def test_polarized_diagonal(rng, m):
    T = rng.standard_normal((5, 4))
    np.testing.assert_allclose(polarized_compound([T] * m), math.factorial(m) * compound(T, m),
                               atol=1e-11)


def test_polarized_diagonal_pencil(rng):
    d = rng.standard_normal((4, 2))
    np.testing.assert_allclose(polarized_compound([np.diag(d[:, 0]), np.diag(d[:, 1])]),
                               np.diag(permanental_compound(d, 2).ravel()), atol=1e-12)


def test_polarized_entries_are_mixed_discriminants(rng):
    S = [rng.standard_normal((4, 5)) for _ in range(3)]
    P = polarized_compound(S)
    for i, r in enumerate(itertools.combinations(range(4), 3)):
        for j, c in enumerate(itertools.combinations(range(5), 3)):
            assert P[i, j] == pytest.approx(mixed_discriminant([X[np.ix_(r, c)] for X in S]),
                                            abs=1e-10)


def test_polarized_rank_deficient_vanishes(rng):
    low = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 5))
    assert np.abs(polarized_compound([low] * 3)).max() < 1e-10


def test_detecting_rank_one_vanishes(rng):
    a, b, c = rng.standard_normal(3), rng.standard_normal(4), rng.standard_normal(3)
    T = np.einsum("i,j,k->ijk", a, b, c)
    assert np.abs(build_detecting(T, 2).body).max() < 1e-12


def test_detecting_factorization(rng):
    A, B, C = (rng.standard_normal((4, 5)) for _ in range(3))
    T = compose(Cpd(A, B, C))
    KR = khatri_rao(compound(B, 3), compound(A, 3))
    Tm = build_detecting(T, 3)
    assert Tm.shape == (16, 20) and Tm.kind == "Tm"
    np.testing.assert_allclose(Tm.body, KR @ q_matrix(C, 3).T, rtol=1e-8, atol=1e-8)
    Rm = build_detecting(T, 3, kind="Rm")
    assert Rm.shape == (16, 64)
    np.testing.assert_allclose(Rm.body, KR @ r_matrix(C, 3).T, rtol=1e-8, atol=1e-8)
    np.testing.assert_allclose(Rm.body @ symmetrizer_G(4, 3), Tm.body, atol=1e-9)


def test_rm_columns_are_tm_at_sorted_index(rng):
    T = rng.standard_normal((3, 3, 3))
    Tm = build_detecting(T, 2).body
    Rm = build_detecting(T, 2, kind="Rm").body
    Q = enumerate_family(Kind.NONDECREASING, 2, 3)
    for i, t in enumerate(enumerate_family(Kind.ALL, 2, 3)):
        np.testing.assert_array_equal(Rm[:, i], Tm[:, Q.rank(sort_tuple(t)) - 1])


def test_detecting_column_definition(rng):
    T = rng.standard_normal((4, 4, 3))
    Tm = build_detecting(T, 2).body
    for i, t in enumerate(enumerate_family(Kind.NONDECREASING, 2, 3)):
        phi = polarized_compound([T[:, :, j - 1] for j in t])
        np.testing.assert_allclose(Tm[:, i], phi.ravel(order="F"), atol=1e-12)


def test_detecting_invalid(rng):
    T = rng.standard_normal((2, 3, 3))
    with pytest.raises(InvalidDimsError):
        build_detecting(T, 3)
    with pytest.raises(InvalidDimsError):
        build_detecting(T, 2, kind="Xm")
