from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from edgestat.distribution import exact_distribution, naive_distribution
from edgestat.errors import EdgeStatError, RecordsError
from edgestat.graph import (
    Graph,
    complete_graph,
    cycle_graph,
    gnp,
    parse_graph6,
    two_cliques,
    write_graph6,
)
from edgestat.search import (
    DensityEvaluator,
    RecordsStore,
    SearchConfig,
    SearchRecord,
    _edgevec,
    brute_force_extremal,
    conditional_vertex_density,
    construction_bound,
    local_search,
    pick_extremes,
    symmetrization_step,
    twin_replace,
)

from conftest import seeded_graphs


# exhaustive search ------------------------------------------------------------

def test_brute_force_examples():
    assert brute_force_extremal(4, 3, 3).density == 1
    rec = brute_force_extremal(4, 3, 2)
    assert rec.density == 1
    g = parse_graph6(rec.graph)
    assert g.m == 4 and g.degrees == (2, 2, 2, 2)  # C4
    assert brute_force_extremal(5, 3, 1).density == Fraction(9, 10)
    assert brute_force_extremal(4, 3, 0).graph == write_graph6(Graph.from_edges(4, []))


def _python_brute_force(n: int) -> dict[tuple[int, int], Fraction]:
    pairs = [(u, v) for v in range(1, n) for u in range(v)]
    best: dict[tuple[int, int], Fraction] = {}
    for mask in range(1 << len(pairs)):
        g = Graph.from_edges(n, [p for i, p in enumerate(pairs) if mask >> i & 1])
        for k in range(1, n + 1):
            d = naive_distribution(g, k)
            for l, c in enumerate(d.counts):
                p = Fraction(c, d.total)
                if p > best.get((k, l), Fraction(-1)):
                    best[k, l] = p
    return best


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_brute_force_matches_python_oracle(n):
    oracle = _python_brute_force(n)
    for (k, l), p in oracle.items():
        assert brute_force_extremal(n, k, l, prune=False).density == p
        rec = brute_force_extremal(n, k, l, prune=True)
        assert rec.density == p
        assert exact_distribution(parse_graph6(rec.graph), k).probability_at(l) == p


def test_prune_agrees_n6():
    for k in range(1, 7):
        for l in range(comb(k, 2) + 1):
            a = brute_force_extremal(6, k, l, prune=False)
            b = brute_force_extremal(6, k, l, prune=True)
            assert a.density == b.density


def test_brute_force_complement_symmetry():
    for n in range(3, 8):
        for k in range(2, n + 1):
            for l in range(comb(k, 2) + 1):
                assert (brute_force_extremal(n, k, l).density
                        == brute_force_extremal(n, k, comb(k, 2) - l).density)


def test_brute_force_witness_has_fewest_edges():
    rec = brute_force_extremal(5, 2, 0)
    assert rec.density == 1 and parse_graph6(rec.graph).m == 0


def test_brute_force_refuses_large_n():
    with pytest.raises(EdgeStatError, match="local_search"):
        brute_force_extremal(9, 3, 1)


def test_bad_parameters():
    with pytest.raises(EdgeStatError):
        brute_force_extremal(5, 3, 4)
    with pytest.raises(EdgeStatError):
        brute_force_extremal(5, 6, 0)


# symmetrisation ----------------------------------------------------------------

def test_conditional_vertex_density_examples():
    g = two_cliques(6)
    vd = conditional_vertex_density(g, 3, 1, 0)
    # v in A with one clique-mate and one outsider, or two outsiders: 3*3/10 + 0
    assert vd.exact and vd.value == Fraction(6, 10) + Fraction(3, 10)
    assert conditional_vertex_density(complete_graph(5), 3, 3, 2).value == 1


def test_conditional_vertex_density_matches_enumeration():
    for g in seeded_graphs(20, 9, seed=51, min_n=3):
        for k in range(1, g.n + 1):
            for l in (0, comb(k, 2) // 2):
                for v in range(g.n):
                    subs = [s for s in combinations(range(g.n), k) if v in s]
                    hits = sum(1 for s in subs
                               if sum(g.has_edge(a, b) for a, b in combinations(s, 2)) == l)
                    vd = conditional_vertex_density(g, k, l, v)
                    assert vd.value == Fraction(hits, len(subs))


def test_conditional_vertex_density_mc_fallback():
    g = gnp(40, 0.2, seed=1)
    vd = conditional_vertex_density(g, 8, 5, 3, budget=1000, samples=40_000, seed=2)
    assert not vd.exact and vd.samples == 40_000
    exact = conditional_vertex_density(g, 8, 5, 3)
    assert abs(float(vd.value) - float(exact.value)) < 0.02


def _is_twin_of(g: Graph, keep: int, drop: int) -> bool:
    return (not g.has_edge(keep, drop)
            and g.rows[drop] == g.rows[keep] & ~(1 << drop))


def test_symmetrization_c5():
    g = symmetrization_step(cycle_graph(5), 3, 1)
    # all densities tie: the twin of vertex 0 replaces vertex 1
    assert _is_twin_of(g, 0, 1)
    assert sorted(g.edges()) == [(0, 4), (1, 4), (2, 3), (3, 4)]


def test_symmetrization_two_cliques_and_k2():
    g = symmetrization_step(two_cliques(6), 3, 1)
    assert _is_twin_of(g, 0, 1)
    assert sorted(g.edges()) == [(0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
    assert symmetrization_step(complete_graph(2), 2, 1).m == 0


def test_symmetrization_structure_random():
    for g in seeded_graphs(30, 8, seed=52, min_n=3):
        k = 3
        l = 1
        dens = [conditional_vertex_density(g, k, l, v).value for v in range(g.n)]
        hi, lo = pick_extremes(dens)
        h = symmetrization_step(g, k, l)
        assert hi != lo and _is_twin_of(h, hi, lo)
        for u, v in combinations([x for x in range(g.n) if x != lo], 2):
            assert h.has_edge(u, v) == g.has_edge(u, v)


def test_pick_extremes_tie_break():
    assert pick_extremes([1, 1, 1]) == (0, 1)
    assert pick_extremes([0, 2, 2, 0]) == (1, 0)


def test_twin_replace_rejects_same_vertex():
    with pytest.raises(EdgeStatError):
        twin_replace(cycle_graph(4), 1, 1)


def test_evaluator_vertex_densities_are_conditional_densities():
    for g in seeded_graphs(10, 9, seed=53, min_n=4):
        ev = DensityEvaluator(g.n, 4, 2, SearchConfig(), seed=0)
        assert ev.exact
        vec = _edgevec(g)
        assert ev.hits(vec) == exact_distribution(g, 4).counts[2]
        expected = [conditional_vertex_density(g, 4, 2, v).value for v in range(g.n)]
        assert ev.vertex_densities(vec) == expected


# constructions and local search -------------------------------------------------

def test_construction_bound_examples():
    rec = construction_bound(6, 3, 1)
    assert rec.density == Fraction(9, 10) and rec.method == "construction:two_cliques"
    assert construction_bound(10, 4, 0).density == 1
    assert construction_bound(30, 3, 1).density == Fraction(3150, 4060)
    assert rec.exact


def test_local_search_small_exact():
    rec = local_search(12, 3, 3, budget=300, seed=1)
    assert rec.density == 1 and rec.exact
    g = parse_graph6(rec.graph)
    assert exact_distribution(g, 3).probability_at(3) == rec.density


def test_local_search_beats_floor_and_is_deterministic():
    a = local_search(24, 3, 1, seed=7)
    assert a.density >= Fraction(1584, 2024)
    assert a == local_search(24, 3, 1, seed=7)
    assert exact_distribution(parse_graph6(a.graph), 3).probability_at(1) == a.density


def test_local_search_workers_identical():
    cfg1 = SearchConfig(restarts=2, use_constructions=False)
    cfg2 = SearchConfig(restarts=2, use_constructions=False, workers=2)
    assert local_search(10, 4, 2, budget=200, seed=3, config=cfg1) == \
        local_search(10, 4, 2, budget=200, seed=3, config=cfg2)


def test_local_search_mc_mode():
    cfg = SearchConfig(restarts=1, exact_limit=0, mc_samples=5000, use_constructions=False)
    rec = local_search(14, 5, 4, budget=50, seed=2, config=cfg)
    assert not rec.exact and 0 <= rec.density <= 1


# records store -----------------------------------------------------------------

def _rec(density, graph, n=4, k=3, l=2):
    return SearchRecord(n, k, l, Fraction(density), graph, "test")


def test_records_insert_and_tie_break(tmp_path):
    store = RecordsStore(tmp_path / "r.jsonl")
    k4 = write_graph6(complete_graph(4))
    c4 = write_graph6(cycle_graph(4))
    assert store.insert(_rec("1/2", k4))
    assert not store.insert(_rec("1/4", c4))
    assert store.insert(_rec("1", k4))
    assert store.insert(_rec("1", c4))  # same density, fewer edges
    assert not store.insert(_rec("1", k4))
    store.save()
    again = RecordsStore(tmp_path / "r.jsonl")
    assert again.get(4, 3, 2).graph == c4 and len(again) == 1


def test_records_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("EDGESTAT_RECORDS", str(tmp_path / "env.jsonl"))
    store = RecordsStore()
    assert store.path == tmp_path / "env.jsonl"


def test_records_corrupt_line(tmp_path):
    path = tmp_path / "bad.jsonl"
    good = json.dumps(_rec("1", write_graph6(cycle_graph(4))).to_json())
    path.write_text(good + "\n{not json\n")
    with pytest.raises(RecordsError, match=r"bad\.jsonl:2"):
        RecordsStore(path)
    path.write_text(json.dumps({**json.loads(good), "n": 5}) + "\n")
    with pytest.raises(RecordsError, match=":1"):
        RecordsStore(path)


def test_record_density_recomputes():
    for rec in [brute_force_extremal(6, 4, 3), construction_bound(9, 3, 2)]:
        g = parse_graph6(rec.graph)
        assert exact_distribution(g, rec.k).probability_at(rec.l) == rec.density
        assert SearchRecord.from_json(json.loads(json.dumps(rec.to_json()))) == rec
