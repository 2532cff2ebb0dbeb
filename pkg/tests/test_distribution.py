from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest

from edgestat.distribution import (
    EdgeDistribution,
    exact_distribution,
    mc_distribution,
    naive_distribution,
    sample_subsets,
)
from edgestat.errors import BudgetExceeded, EdgeStatError
from edgestat.graph import (
    clique_union,
    complement,
    complete_graph,
    gnp,
    path_graph,
    two_cliques,
)

from conftest import seeded_graphs


def test_examples():
    assert exact_distribution(path_graph(3), 2).counts == (1, 2)
    assert exact_distribution(complete_graph(4), 3).counts == (0, 0, 0, 4)
    d = exact_distribution(two_cliques(6), 3)
    assert d.counts == (0, 18, 0, 2)
    assert d.probability_at(1) == Fraction(9, 10)
    assert d.total == 20


def test_k_equal_one_and_n():
    g = gnp(7, 0.5, seed=1)
    assert exact_distribution(g, 1).counts == (7,)
    full = exact_distribution(g, 7)
    assert full.counts[g.m] == 1 and sum(full.counts) == 1


def test_gray_walk_matches_naive():
    for g in seeded_graphs(60, 10, seed=21):
        for k in range(1, g.n + 1):
            assert exact_distribution(g, k) == naive_distribution(g, k)


def test_complement_symmetry():
    for g in seeded_graphs(200, 11, seed=22):
        gc = complement(g)
        for k in range(1, g.n + 1):
            assert exact_distribution(g, k).counts == exact_distribution(gc, k).counts[::-1]


def test_vertex_deletion_monotonicity():
    # P_G(X = l) is an average of P_{G-v}(X = l) over v, so it cannot exceed the max
    for g in seeded_graphs(80, 9, seed=23, min_n=3):
        for k in range(1, g.n):
            d = exact_distribution(g, k)
            subs = [exact_distribution(g.delete_vertex(v), k) for v in range(g.n)]
            for l in range(comb(k, 2) + 1):
                assert d.probability_at(l) <= max(s.probability_at(l) for s in subs)
                assert d.probability_at(l) == sum(
                    (s.probability_at(l) for s in subs), Fraction(0)) / g.n


def test_probabilities_sum_to_one():
    d = exact_distribution(gnp(12, 0.4, seed=3), 5)
    assert sum(d.probabilities()) == 1


def test_json_roundtrip():
    d = exact_distribution(gnp(14, 0.3, seed=4), 6)
    assert EdgeDistribution.from_json(d.to_json()) == d
    bad = d.to_json()
    bad["counts"][0]["count"] = str(int(bad["counts"][0]["count"]) + 1)
    with pytest.raises(EdgeStatError):
        EdgeDistribution.from_json(bad)


def test_budget_refusal_names_count():
    with pytest.raises(BudgetExceeded) as info:
        exact_distribution(gnp(30, 0.5, seed=0), 15, budget=10**6)
    assert str(comb(30, 15)) in str(info.value)


def test_bad_k():
    with pytest.raises(EdgeStatError):
        exact_distribution(complete_graph(4), 0)
    with pytest.raises(EdgeStatError):
        exact_distribution(complete_graph(4), 5)
    with pytest.raises(EdgeStatError):
        exact_distribution(complete_graph(4), 2).probability_at(2)


def test_workers_give_identical_result():
    g = gnp(18, 0.5, seed=9)
    assert exact_distribution(g, 7, workers=2) == exact_distribution(g, 7)


def test_mc_k4_is_certain():
    est = mc_distribution(complete_graph(4), 3, 1000, seed=5)
    assert est.hits == (0, 0, 0, 1000)
    assert est.estimates[3] == 1.0


def test_mc_close_to_exact():
    g = two_cliques(30)
    est = mc_distribution(g, 3, 200_000, seed=11)
    exact = float(exact_distribution(g, 3).probability_at(1))
    assert abs(est.estimates[1] - exact) <= 5 * est.stderr[1]


def test_mc_deterministic_and_worker_independent():
    g = clique_union(200, 10)
    a = mc_distribution(g, 6, 150_000, seed=3)
    b = mc_distribution(g, 6, 150_000, seed=3, workers=2)
    assert a == b
    assert mc_distribution(g, 6, 150_000, seed=4) != a


def test_mc_requires_seed():
    with pytest.raises(EdgeStatError):
        mc_distribution(complete_graph(4), 2, 10, seed=None)


def test_sample_subsets_are_uniform():
    n, k, size = 7, 3, 140_000
    subs = sample_subsets(n, k, size, np.random.default_rng(0))
    assert all(len(set(row)) == k for row in subs[:1000].tolist())
    keys = np.sort(subs, axis=1) @ (n ** np.arange(k))
    index = {sum(c[i] * n**i for i in range(k)): j for j, c in enumerate(combinations(range(n), k))}
    counts = np.zeros(len(index))
    for key, c in zip(*np.unique(keys, return_counts=True)):
        counts[index[int(key)]] = c
    expected = size / len(index)
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    # 34 degrees of freedom; 0.999 quantile is about 65.2
    assert chi2 < 65.2


def test_sample_subsets_large_n():
    subs = sample_subsets(10**6, 8, 2000, np.random.default_rng(1))
    assert subs.min() >= 0 and subs.max() < 10**6
    assert all(len(set(row)) == 8 for row in subs.tolist())


def test_mc_consistency_with_exact():
    outside = 0
    for i, g in enumerate(seeded_graphs(100, 12, seed=31, min_n=3)):
        k = 2 + i % (g.n - 1)
        d = exact_distribution(g, k)
        l = max(range(len(d.counts)), key=lambda j: d.counts[j])
        p = float(d.probability_at(l))
        est = mc_distribution(g, k, 20_000, seed=i)
        se = max(est.stderr[l], 1e-12)
        outside += abs(est.estimates[l] - p) > 3 * se
    assert outside <= 2


def test_mc_two_cliques_six():
    est = mc_distribution(two_cliques(6), 3, 100_000, seed=0)
    assert abs(est.estimates[1] - 0.9) <= 5 * est.stderr[1]
    assert abs(sum(est.estimates) - 1) <= 1e-12
