"""Multi-index arithmetic.

A multi-index is a tuple of nonnegative integers of fixed length m. It
indexes coefficients of truncated power series and the operators of a
derivative system. All arithmetic is exact integer arithmetic.
"""
from __future__ import annotations

import math
from typing import Iterator, Sequence

from .errors import DomainError

MultiIndex = tuple[int, ...]


def _check(a: Sequence[int]) -> MultiIndex:
    t = tuple(int(x) for x in a)
    if any(x < 0 for x in t):
        raise ValueError(f"multi-index entries must be nonnegative: {t}")
    return t


def mi_add(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    """Componentwise sum. Lengths must match."""
    a, b = _check(a), _check(b)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def mi_sub(a: Sequence[int], b: Sequence[int]) -> MultiIndex:
    """Componentwise difference a - b; requires b <= a componentwise."""
    a, b = _check(a), _check(b)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if not all(y <= x for x, y in zip(a, b)):
        raise DomainError(f"{b} is not componentwise <= {a}")
    return tuple(x - y for x, y in zip(a, b))


def mi_le(a: Sequence[int], b: Sequence[int]) -> bool:
    """Componentwise a <= b (the partial order of the index lattice)."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return all(x <= y for x, y in zip(a, b))


def mi_abs(a: Sequence[int]) -> int:
    """Order |a| = sum of entries."""
    return sum(_check(a))


def mi_factorial(a: Sequence[int]) -> int:
    """a! = product of entry factorials, exact."""
    out = 1
    for x in _check(a):
        out *= math.factorial(x)
    return out


def mi_binomial(k: Sequence[int], l: Sequence[int]) -> int:
    """Product of per-coordinate binomials C(k_i, l_i); requires l <= k.

    Equals k! / (l! (k-l)!) and stays exact for any desk-scale index.
    """
    k, l = _check(k), _check(l)
    if len(k) != len(l):
        raise ValueError(f"length mismatch: {len(k)} vs {len(l)}")
    if not mi_le(l, k):
        raise DomainError(f"{l} is not componentwise <= {k}")
    out = 1
    for x, y in zip(k, l):
        out *= math.comb(x, y)
    return out


def mi_below(k: Sequence[int]) -> Iterator[MultiIndex]:
    """All l with 0 <= l <= k componentwise, in lexicographic order."""
    k = _check(k)
    if not k:
        yield ()
        return
    for first in range(k[0] + 1):
        for rest in mi_below(k[1:]):
            yield (first,) + rest


def _compositions(total: int, parts: int) -> Iterator[MultiIndex]:
    # descending lexicographic: (total, 0, ...) first
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def mi_enumerate(m: int, n: int) -> list[MultiIndex]:
    """All k of length m with |k| <= n, in graded lexicographic order.

    Grades ascend; within a grade the lexicographically larger index comes
    first, so for m=2 the order starts (0,0), (1,0), (0,1), (2,0), (1,1),
    (0,2). The count is C(m+n, m). The order is fixed so that coefficient
    tables are reproducible across runs.
    """
    if m < 1:
        raise ValueError(f"need at least one variable, got m={m}")
    if n < 0:
        raise ValueError(f"degree bound must be nonnegative, got n={n}")
    out: list[MultiIndex] = []
    for total in range(n + 1):
        out.extend(_compositions(total, m))
    return out


def mi_count(m: int, n: int) -> int:
    """|{k : |k| <= n}| = C(m+n, m)."""
    return math.comb(m + n, m)
