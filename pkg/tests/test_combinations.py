from __future__ import annotations

from itertools import combinations
from math import comb

import pytest

from edgestat.combinations import revolving_door, steps, unrank


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 10) for k in range(0, n + 1)])
def test_revolving_door_single_swaps_and_coverage(n, k):
    seq = list(revolving_door(n, k))
    assert len(seq) == comb(n, k)
    assert set(seq) == set(combinations(range(n), k))
    for a, b in zip(seq, seq[1:]):
        assert len(set(a) ^ set(b)) == 2


@pytest.mark.parametrize("n,k", [(6, 3), (9, 4), (10, 1), (7, 7), (12, 5)])
def test_unrank_matches_sequence(n, k):
    seq = list(revolving_door(n, k))
    for r, sub in enumerate(seq):
        assert tuple(unrank(r, n, k)) == sub


def test_steps_report_the_swap():
    n, k = 8, 3
    c = unrank(0, n, k)
    prev = set(c)
    count = 1
    for out, inn in steps(c, n):
        cur = set(c)
        assert prev - cur == {out} and cur - prev == {inn}
        prev = cur
        count += 1
    assert count == comb(n, k)


def test_steps_from_middle():
    n, k = 9, 4
    seq = list(revolving_door(n, k))
    c = unrank(50, n, k)
    rest = [tuple(c)]
    for _ in steps(c, n):
        rest.append(tuple(sorted(c)))
    assert rest == seq[50:]
