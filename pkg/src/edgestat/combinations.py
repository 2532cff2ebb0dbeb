"""Revolving-door (single-swap) order on k-subsets, with ranking.

The order is the one of Knuth's Algorithm R (TAOCP 7.2.1.3): subsets of
{0..n-1} without n-1 come first, then those containing n-1 with the rest in
reversed order, recursively.  Consecutive subsets differ by removing one
element and adding another.
"""

from __future__ import annotations

from math import comb
from typing import Iterator


def unrank(rank: int, n: int, k: int) -> list[int]:
    """Sorted k-subset at position ``rank`` of the revolving-door order."""
    if not 0 <= rank < comb(n, k):
        raise IndexError(f"rank {rank} out of range for C({n}, {k})")
    out = []
    while k > 0:
        if k == n:
            out.extend(range(n))
            break
        lower = comb(n - 1, k)
        if rank >= lower:
            out.append(n - 1)
            rank = comb(n - 1, k - 1) - 1 - (rank - lower)
            k -= 1
        n -= 1
    return sorted(out)


def steps(c: list[int], n: int) -> Iterator[tuple[int, int]]:
    """Advance the sorted combination ``c`` in place; yield (removed, added) per step.

    Stops after the last subset of the order.  ``c`` may start anywhere in the
    order (e.g. from :func:`unrank`), which is what chunked enumeration uses.
    """
    t = len(c)
    if t == 0 or t == n:
        return
    # 1-based view: a[1..t] = c, a[t+1] = n
    a = [0] + c + [n]
    odd = t & 1
    while True:
        if odd:
            if a[1] + 1 < a[2]:
                old = a[1]
                a[1] = old + 1
                c[0] = a[1]
                yield old, old + 1
                continue
            j = 2
            state = 4
        else:
            if a[1] > 0:
                old = a[1]
                a[1] = old - 1
                c[0] = a[1]
                yield old, old - 1
                continue
            j = 2
            state = 5
        while True:
            if j > t:
                return
            if state == 4:
                # here a[j] == a[j-1] + 1
                if a[j] >= j:
                    removed = a[j]
                    added = j - 2
                    a[j] = a[j - 1]
                    a[j - 1] = j - 2
                    break
                j += 1
                state = 5
            else:
                # here a[j-1] == j - 2
                if a[j] + 1 < a[j + 1]:
                    removed = a[j - 1]
                    added = a[j] + 1
                    a[j - 1] = a[j]
                    a[j] = a[j] + 1
                    break
                j += 1
                state = 4
        c[:] = a[1:t + 1]
        yield removed, added


def revolving_door(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """All k-subsets of range(n) in revolving-door order, as sorted tuples."""
    c = list(range(k))
    yield tuple(c)
    for _ in steps(c, n):
        yield tuple(c)
