import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from cpdgevd.exceptions import BinomialOverflowError, InvalidDimsError, NotMemberError
from cpdgevd.multiindex import (Kind, binom, cardinality, enumerate_family, multiset_permutations,
                                sort_tuple)


def test_two_by_two_families():
    assert list(enumerate_family(Kind.STRICT, 2, 2)) == [(1, 2)]
    assert list(enumerate_family(Kind.NONDECREASING, 2, 2)) == [(1, 1), (1, 2), (2, 2)]
    assert list(enumerate_family(Kind.ALL, 2, 2)) == [(1, 1), (1, 2), (2, 1), (2, 2)]


def test_rank_examples():
    assert enumerate_family(Kind.STRICT, 2, 2).rank((1, 2)) == 1
    assert enumerate_family(Kind.NONDECREASING, 2, 2).rank((1, 2)) == 2
    assert enumerate_family(Kind.ALL, 2, 2).rank((1, 2)) == 2
    assert enumerate_family(Kind.NONDECREASING, 2, 2).rank((2, 2)) == 3
    assert enumerate_family(Kind.ALL, 2, 2).rank((2, 2)) == 4
    assert enumerate_family(Kind.STRICT, 3, 5).unrank(1) == (1, 2, 3)


def test_strict_needs_k_le_n():
    with pytest.raises(InvalidDimsError):
        enumerate_family(Kind.STRICT, 3, 2)


@pytest.mark.parametrize("kind,t", [(Kind.STRICT, (2, 2)), (Kind.STRICT, (2, 1)),
                                    (Kind.NONDECREASING, (2, 1)), (Kind.ALL, (0, 1)),
                                    (Kind.ALL, (1, 2, 3))])
def test_not_member(kind, t):
    with pytest.raises(NotMemberError):
        enumerate_family(kind, 2, 2).rank(t)


def test_unrank_out_of_range():
    table = enumerate_family(Kind.ALL, 2, 3)
    with pytest.raises(NotMemberError):
        table.unrank(0)
    with pytest.raises(NotMemberError):
        table.unrank(10)


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("k,n", [(1, 1), (2, 3), (3, 4), (4, 4), (3, 6)])
def test_order_cardinality_and_inverse(kind, k, n):
    if kind is Kind.STRICT and k > n:
        pytest.skip("empty")
    table = enumerate_family(kind, k, n)
    tuples = list(table)
    assert len(tuples) == cardinality(kind, k, n) == table.size
    assert all(a < b for a, b in zip(tuples, tuples[1:]))
    for i, t in enumerate(tuples, start=1):
        assert table.rank(t) == i
        assert table.unrank(i) == t


def test_cardinalities():
    assert cardinality(Kind.STRICT, 3, 5) == 10
    assert cardinality(Kind.NONDECREASING, 3, 4) == 20
    assert cardinality(Kind.ALL, 3, 4) == 64


@given(st.integers(1, 40), st.integers(1, 40))
def test_binomial_recurrence(n, k):
    assert binom(n, k) == binom(n - 1, k - 1) + binom(n - 1, k)
    assert binom(n, k) == math.comb(n, k)


def test_binomial_overflow():
    with pytest.raises(BinomialOverflowError):
        binom(200, 100)


def test_large_family_addressable_without_materializing():
    table = enumerate_family(Kind.STRICT, 6, 84)
    assert table.size == math.comb(84, 6)
    last = table.unrank(table.size)
    assert last == tuple(range(79, 85))
    assert table.rank(last) == table.size


@settings(max_examples=60)
@given(st.sampled_from(list(Kind)), st.integers(1, 5), st.integers(1, 7), st.data())
def test_rank_unrank_random(kind, k, n, data):
    if kind is Kind.STRICT and k > n:
        return
    table = enumerate_family(kind, k, n)
    i = data.draw(st.integers(1, table.size))
    assert table.rank(table.unrank(i)) == i


def test_multiset_permutations():
    perms = multiset_permutations((1, 2, 2))
    assert len(perms) == 6
    assert perms.count((1, 2, 2)) == 2
    assert multiset_permutations((1,)) == [(1,)]
    assert sorted(multiset_permutations((1, 2, 3))) == sorted(itertools.permutations((1, 2, 3)))


@given(st.lists(st.integers(1, 4), min_size=1, max_size=5))
def test_multiset_permutation_count(t):
    perms = multiset_permutations(tuple(t))
    assert len(perms) == math.factorial(len(t))
    assert all(sorted(p) == sorted(t) for p in perms)


def test_sort_tuple():
    assert sort_tuple((2, 1)) == (1, 2)
    assert sort_tuple((3, 1, 3)) == (1, 3, 3)
    assert sort_tuple((1, 2, 3)) == (1, 2, 3)
