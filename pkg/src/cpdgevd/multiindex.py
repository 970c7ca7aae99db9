"""Lexicographically ordered multi-index families.

Three families of k-tuples over the alphabet ``{1, ..., n}`` are used
throughout the package:

* ``STRICT``: ``i_1 < i_2 < ... < i_k`` (``C(n, k)`` tuples),
* ``NONDECREASING``: ``i_1 <= i_2 <= ... <= i_k`` (``C(n + k - 1, k)`` tuples),
* ``ALL``: unrestricted (``n ** k`` tuples).

Tuples and positions are 1-based. Ranking and unranking are computed
combinatorially, so huge families can be addressed without materializing
them.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

from .exceptions import BinomialOverflowError, InvalidDimsError, NotMemberError

_INT64_MAX = 2**63 - 1


class Kind(enum.Enum):
    STRICT = "strict"
    NONDECREASING = "nondecreasing"
    ALL = "all"


def binom(n: int, k: int) -> int:
    """Binomial coefficient, raising if it overflows a signed 64-bit integer."""
    if k < 0 or n < 0 or k > n:
        return 0
    value = math.comb(n, k)
    if value > _INT64_MAX:
        raise BinomialOverflowError(f"C({n},{k}) exceeds the 64-bit range")
    return value


def cardinality(kind: Kind, k: int, n: int) -> int:
    kind = Kind(kind)
    if kind is Kind.STRICT:
        return binom(n, k)
    if kind is Kind.NONDECREASING:
        return binom(n + k - 1, k)
    value = n**k
    if value > _INT64_MAX:
        raise BinomialOverflowError(f"{n}**{k} exceeds the 64-bit range")
    return value


def _strict_rank0(t, n):
    # 0-based lexicographic rank of a strictly increasing 1-based tuple
    k = len(t)
    r = 0
    prev = 0
    for p, v in enumerate(t):
        for w in range(prev + 1, v):
            r += binom(n - w, k - p - 1)
        prev = v
    return r


def _strict_unrank0(r, k, n):
    out = []
    prev = 0
    for p in range(k):
        w = prev + 1
        while True:
            block = binom(n - w, k - p - 1)
            if r < block:
                break
            r -= block
            w += 1
        out.append(w)
        prev = w
    return tuple(out)


@dataclass(frozen=True)
class MultiIndexTable:
    """One multi-index family, ordered lexicographically.

    The ``tuples`` attribute is materialized lazily on first access; ``rank``
    and ``unrank`` never need it.
    """

    kind: Kind
    k: int
    n: int
    size: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.k < 1 or self.n < 1:
            raise InvalidDimsError(f"need k >= 1 and n >= 1, got k={self.k}, n={self.n}")
        if self.kind is Kind.STRICT and self.k > self.n:
            raise InvalidDimsError(f"strict tuples need k <= n, got k={self.k}, n={self.n}")
        object.__setattr__(self, "size", cardinality(self.kind, self.k, self.n))

    def __len__(self):
        return self.size

    def __iter__(self):
        rng = range(1, self.n + 1)
        if self.kind is Kind.STRICT:
            return itertools.combinations(rng, self.k)
        if self.kind is Kind.NONDECREASING:
            return itertools.combinations_with_replacement(rng, self.k)
        return itertools.product(rng, repeat=self.k)

    @cached_property
    def tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(iter(self))

    def __contains__(self, t):
        try:
            self._check_member(tuple(t))
        except NotMemberError:
            return False
        return True

    def _check_member(self, t):
        if len(t) != self.k or any((not isinstance(v, int)) or v < 1 or v > self.n for v in t):
            raise NotMemberError(f"{t!r} is not a {self.k}-tuple over 1..{self.n}")
        pairs = zip(t, t[1:])
        if self.kind is Kind.STRICT and not all(a < b for a, b in pairs):
            raise NotMemberError(f"{t!r} is not strictly increasing")
        if self.kind is Kind.NONDECREASING and not all(a <= b for a, b in pairs):
            raise NotMemberError(f"{t!r} is not non-decreasing")

    def rank(self, t) -> int:
        """1-based lexicographic position of ``t``."""
        t = tuple(int(v) for v in t)
        self._check_member(t)
        if self.kind is Kind.STRICT:
            return _strict_rank0(t, self.n) + 1
        if self.kind is Kind.NONDECREASING:
            shifted = tuple(v + p for p, v in enumerate(t))
            return _strict_rank0(shifted, self.n + self.k - 1) + 1
        r = 0
        for v in t:
            r = r * self.n + (v - 1)
        return r + 1

    def unrank(self, i: int) -> tuple[int, ...]:
        """Tuple at 1-based position ``i``."""
        if not 1 <= i <= self.size:
            raise NotMemberError(f"position {i} outside 1..{self.size}")
        r = i - 1
        if self.kind is Kind.STRICT:
            return _strict_unrank0(r, self.k, self.n)
        if self.kind is Kind.NONDECREASING:
            shifted = _strict_unrank0(r, self.k, self.n + self.k - 1)
            return tuple(v - p for p, v in enumerate(shifted))
        digits = []
        for _ in range(self.k):
            r, d = divmod(r, self.n)
            digits.append(d + 1)
        return tuple(reversed(digits))


def enumerate_family(kind, k: int, n: int) -> MultiIndexTable:
    """Build the lexicographically ordered table of ``kind`` k-tuples over 1..n."""
    return MultiIndexTable(Kind(kind), k, n)


def strict(k, n):
    return MultiIndexTable(Kind.STRICT, k, n)


def nondecreasing(k, n):
    return MultiIndexTable(Kind.NONDECREASING, k, n)


def all_tuples(k, n):
    return MultiIndexTable(Kind.ALL, k, n)


def multiset_permutations(t) -> list[tuple[int, ...]]:
    """All ``m!`` rearrangements of ``t``, repeats included."""
    return list(itertools.permutations(tuple(t)))


def sort_tuple(t) -> tuple[int, ...]:
    return tuple(sorted(t))
