"""k-subsets of {0, ..., n-1}.

Multi-indices are strictly increasing tuples of ints, 0-based.  Lists of them
are always in lexicographic order, which is also the Plücker coordinate
order used throughout the package.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

MultiIndex = tuple[int, ...]


class InvalidParams(ValueError):
    pass


def _check(n: int, k: int):
    if n < 0 or k < 0 or k > n:
        raise InvalidParams(f"need 0 <= k <= n, got n={n}, k={k}")


@lru_cache(maxsize=None)
def subsets_lex(n: int, k: int) -> tuple[MultiIndex, ...]:
    _check(n, k)
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def index_map(n: int, k: int) -> dict[MultiIndex, int]:
    return {I: a for a, I in enumerate(subsets_lex(n, k))}


def rank_lex(I: MultiIndex, n: int) -> int:
    """Position of ``I`` in ``subsets_lex(n, len(I))``."""
    k = len(I)
    r = 0
    prev = -1
    for pos, x in enumerate(I):
        for y in range(prev + 1, x):
            r += comb(n - y - 1, k - pos - 1)
        prev = x
    return r


def unrank_lex(a: int, n: int, k: int) -> MultiIndex:
    _check(n, k)
    if not 0 <= a < comb(n, k):
        raise InvalidParams(f"rank {a} out of range for C({n},{k})")
    out = []
    x = 0
    for pos in range(k):
        while True:
            c = comb(n - x - 1, k - pos - 1)
            if a < c:
                break
            a -= c
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def complement(I: MultiIndex, n: int) -> MultiIndex:
    s = set(I)
    return tuple(x for x in range(n) if x not in s)


def permutation_sign(perm) -> int:
    """Sign of a permutation given as a sequence of distinct ints."""
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    order = sorted(range(len(perm)), key=perm.__getitem__)
    # cycle decomposition on the relative order
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def complement_sign(I: MultiIndex, n: int) -> int:
    """Sign of the permutation ``I`` followed by its sorted complement."""
    # inversions: pairs (x in I, y in complement) with y < x
    inv = sum(x - pos for pos, x in enumerate(I))
    return -1 if inv % 2 else 1


def to_mask(I: MultiIndex) -> int:
    m = 0
    for x in I:
        m |= 1 << x
    return m


def from_mask(m: int) -> MultiIndex:
    out = []
    x = 0
    while m:
        if m & 1:
            out.append(x)
        m >>= 1
        x += 1
    return tuple(out)


def hamming_distance(I: MultiIndex, J: MultiIndex) -> int:
    """Size of the symmetric difference."""
    return (to_mask(I) ^ to_mask(J)).bit_count()


def hamming_ball(center: MultiIndex, n: int, radius: int) -> list[MultiIndex]:
    """Multi-indices reachable from ``center`` by at most ``radius`` exchanges.

    One exchange swaps one element of the index for one outside it, so it
    moves the symmetric-difference distance by 2.
    """
    k = len(center)
    return [J for J in subsets_lex(n, k) if hamming_distance(center, J) <= 2 * radius]


def position(j: int, I: MultiIndex) -> int:
    """Lexicographic position of ``j`` inside ``I`` (0 if absent)."""
    for q, x in enumerate(I):
        if x == j:
            return q
    return 0
