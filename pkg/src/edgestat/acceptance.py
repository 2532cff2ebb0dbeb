"""End-to-end verification suite, shared by ``edgestat verify`` and the tests.

Each criterion returns a :class:`CriterionResult`; tolerances are fixed here.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterator

import numpy as np

from .census import census
from .distribution import exact_distribution, mc_distribution, naive_distribution
from .graph import Graph, clique_union, complement, gnp, perfect_matching, symm_diff_sum, two_cliques
from .moments import (
    anti_concentration_check,
    binomial_moment_closed_form,
    brun_check,
    distribution_moments,
    expected_edges,
    fourth_central_closed_form,
    shift_inequality_check,
    variance_closed_form,
)
from .search import brute_force_extremal, construction_bound, local_search

SEED = 2024
MC_SEED = 1
SEARCH_SEED = 7

GOODMAN_TOL = 0.03
ONE_OVER_E_TOL = 0.03
BRUN_RANGE = (Fraction(4, 5), Fraction(21, 20))


@dataclass(frozen=True)
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def random_graph(seed: int, index: int, max_n: int, min_n: int = 1) -> Graph:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
    n = int(rng.integers(min_n, max_n + 1))
    p = float(rng.random())
    return gnp(n, p, seed=int(rng.integers(2**63)))


def corpus(count: int, max_n: int, seed: int = SEED, min_n: int = 1) -> Iterator[Graph]:
    for i in range(count):
        yield random_graph(seed, i, max_n, min_n)


def oracle_equivalence(count: int = 200, max_n: int = 12) -> CriterionResult:
    mismatches = []
    cases = 0
    for i, g in enumerate(corpus(count, max_n)):
        cen = census(g)
        for k in range(1, g.n + 1):
            cases += 1
            d = exact_distribution(g, k)
            if d != naive_distribution(g, k):
                mismatches.append(f"graph {i} k={k}: enumerators differ")
                continue
            ms = distribution_moments(d)
            closed = {
                "mu": expected_edges(g, k),
                "central2": variance_closed_form(g, k, cen),
                "central4": fourth_central_closed_form(g, k, cen),
            }
            for name, val in closed.items():
                if val != getattr(ms, name):
                    mismatches.append(f"graph {i} k={k}: {name}")
            for r in range(1, 5):
                if binomial_moment_closed_form(g, k, r, cen) != ms.binom_moments[r]:
                    mismatches.append(f"graph {i} k={k}: binomial moment r={r}")
    detail = f"{cases} (graph, k) cases, {len(mismatches)} mismatches"
    if mismatches:
        detail += "; first: " + mismatches[0]
    return CriterionResult(1, "oracle equivalence (exact)", not mismatches, detail)


def complement_and_monotonicity(count: int = 200, max_n: int = 12,
                                brute_max_n: int = 7) -> CriterionResult:
    sym_bad = 0
    for g in corpus(count, max_n):
        gc = complement(g)
        for k in range(1, g.n + 1):
            a = exact_distribution(g, k).counts
            b = exact_distribution(gc, k).counts
            if a != b[::-1]:
                sym_bad += 1
    mono_bad = []
    csym_bad = 0
    for k in range(1, brute_max_n + 1):
        for l in range(comb(k, 2) + 1):
            vals = [brute_force_extremal(n, k, l).density for n in range(k, brute_max_n + 1)]
            for n, (x, y) in enumerate(zip(vals, vals[1:]), start=k):
                if y > x:
                    mono_bad.append((n, k, l))
            for n in range(k, brute_max_n + 1):
                if (brute_force_extremal(n, k, l).density
                        != brute_force_extremal(n, k, comb(k, 2) - l).density):
                    csym_bad += 1
    ok = not sym_bad and not mono_bad and not csym_bad
    detail = (f"complement symmetry violations {sym_bad}; brute-force I(n,k,l) increases "
              f"{len(mono_bad)} times for n<={brute_max_n}; I(n,k,l) != I(n,k,C(k,2)-l) "
              f"{csym_bad} times")
    return CriterionResult(2, "complement symmetry and monotonicity", ok, detail)


def goodman_corner() -> CriterionResult:
    vals = {}
    for l in (1, 2):
        vals[l] = [brute_force_extremal(n, 3, l).density for n in (5, 6, 7)]
    ok = all(v >= Fraction(3, 4) for seq in vals.values() for v in seq)
    ok &= all(x >= y for seq in vals.values() for x, y in zip(seq, seq[1:]))
    big = exact_distribution(two_cliques(30), 3).probability_at(1)
    ok &= big == Fraction(3150, 4060)
    ok &= abs(float(big) - 0.75) <= GOODMAN_TOL
    detail = (f"I(n,3,1)={[str(v) for v in vals[1]]}, I(n,3,2)={[str(v) for v in vals[2]]} "
              f"for n=5,6,7; two_cliques(30) P(X=1)={big} ~ {float(big):.4f}")
    return CriterionResult(3, "Goodman corner", ok, detail)


def clique_union_one_over_e(samples: int = 10**6) -> CriterionResult:
    est = mc_distribution(clique_union(1120, 28), 8, samples, MC_SEED)
    p = est.estimates[1]
    exact = Fraction(28 * comb(40, 2) * comb(27, 6) * 40**6, comb(1120, 8))
    gap = abs(p - 1 / math.e)
    ok = gap <= ONE_OVER_E_TOL
    detail = (f"MC P(X=1)={p:.5f} +- {est.stderr[1]:.5f}, |p - 1/e|={gap:.4f} "
              f"(tol {ONE_OVER_E_TOL}); exact value {float(exact):.5f}")
    return CriterionResult(4, "1/e clique-union construction", ok, detail)


def poisson_moments() -> CriterionResult:
    g = perfect_matching(100)
    ratios = {r: brun_check(g, 10, r).ratio for r in (1, 2, 3)}
    lo, hi = BRUN_RANGE
    ok = all(lo <= x <= hi for x in ratios.values())
    detail = ", ".join(f"r={r}: {float(x):.4f}" for r, x in ratios.items())
    detail += f" (required in [{float(lo)}, {float(hi)}])"
    return CriterionResult(5, "Poisson binomial moments", ok, detail)


def anti_concentration_suite(count: int = 500, max_n: int = 12) -> CriterionResult:
    checked = violations = 0
    i = 0
    while checked < count:
        g = random_graph(SEED + 6, i, max_n, min_n=2)
        rng = np.random.default_rng(np.random.SeedSequence(SEED + 60, spawn_key=(i,)))
        k = int(rng.integers(2, g.n + 1))
        i += 1
        d = exact_distribution(g, k)
        if distribution_moments(d).central2 == 0:
            continue
        checked += 1
        if not anti_concentration_check(d).holds:
            violations += 1
    return CriterionResult(6, "anti-concentration suite", violations == 0,
                           f"{checked} cases, {violations} violations")


def shift_suite(count: int = 100, max_n: int = 11) -> CriterionResult:
    checks = violations = 0
    for g in corpus(count, max_n, seed=SEED + 7, min_n=2):
        dists = [None] + [exact_distribution(g, k) for k in range(1, g.n + 1)]
        for k in range(2, g.n + 1):
            for t in range(comb(k, 2) + 1):
                rep = shift_inequality_check(g, k, t, dists=(dists[k - 1], dists[k]))
                checks += 2
                violations += (not rep.lower_holds) + (not rep.upper_holds)
    return CriterionResult(7, "shift inequalities", violations == 0,
                           f"{checks} inequality checks, {violations} violations")


def symm_diff_identity(count: int = 1000, max_n: int = 50) -> CriterionResult:
    bad = 0
    for g in corpus(count, max_n, seed=SEED + 8):
        rhs = 2 * ((g.n - 1) * g.m - sum(comb(d, 2) for d in g.degrees))
        bad += symm_diff_sum(g) != rhs
    return CriterionResult(8, "symmetric-difference identity", bad == 0,
                           f"{count} graphs, {bad} mismatches")


def search_sanity() -> CriterionResult:
    found = local_search(24, 3, 1, seed=SEARCH_SEED)
    floor = construction_bound(24, 3, 1)
    brute = brute_force_extremal(4, 3, 2)
    ok = found.density >= floor.density and brute.density == 1
    detail = (f"local_search {found.density} vs construction {floor.density}; "
              f"brute_force(4,3,2)={brute.density}")
    return CriterionResult(9, "search sanity", ok, detail)


def _randomized_outputs() -> list[str]:
    est = mc_distribution(clique_union(1120, 28), 8, 10**6, MC_SEED)
    rec = local_search(24, 3, 1, seed=SEARCH_SEED)
    graphs = [g.rows for g in corpus(50, 12)]
    return [
        json.dumps(est.to_json(), sort_keys=True),
        json.dumps(rec.to_json(), sort_keys=True),
        json.dumps(graphs),
    ]


def determinism() -> CriterionResult:
    a = _randomized_outputs()
    b = _randomized_outputs()
    same = [x == y for x, y in zip(a, b)]
    return CriterionResult(10, "determinism", all(same),
                           f"MC estimate, local search record, random corpus identical: {same}")


CRITERIA: list[Callable[[], CriterionResult]] = [
    oracle_equivalence,
    complement_and_monotonicity,
    goodman_corner,
    clique_union_one_over_e,
    poisson_moments,
    anti_concentration_suite,
    shift_suite,
    symm_diff_identity,
    search_sanity,
    determinism,
]


def timed(fn: Callable[[], CriterionResult]) -> CriterionResult:
    t0 = time.perf_counter()
    res = fn()
    return CriterionResult(res.number, res.title, res.passed, res.detail,
                           time.perf_counter() - t0)


def run_all(echo: Callable[[str], None] | None = print) -> list[CriterionResult]:
    results = []
    for fn in CRITERIA:
        res = timed(fn)
        if echo:
            echo(res.line())
        results.append(res)
    return results
