"""Counts of (not necessarily induced) subgraphs with at most four edges.

Every graph without isolated vertices and with 1 to 4 edges appears here, which
is exactly what the closed-form moment formulas need.  Connected shapes are
counted from degrees, codegrees and triangle counts; disconnected shapes follow
by inclusion-exclusion against the connected ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Mapping

from .graph import Graph

# name -> witness edge list of the shape itself
SHAPES: dict[str, tuple[tuple[int, int], ...]] = {
    "K2": ((0, 1),),
    "K1,2": ((0, 1), (0, 2)),
    "2K2": ((0, 1), (2, 3)),
    "K3": ((0, 1), (1, 2), (0, 2)),
    "P4": ((0, 1), (1, 2), (2, 3)),
    "K1,3": ((0, 1), (0, 2), (0, 3)),
    "K2+K1,2": ((0, 1), (2, 3), (2, 4)),
    "3K2": ((0, 1), (2, 3), (4, 5)),
    "4K2": ((0, 1), (2, 3), (4, 5), (6, 7)),
    "2K2+K1,2": ((0, 1), (2, 3), (4, 5), (4, 6)),
    "2K1,2": ((0, 1), (0, 2), (3, 4), (3, 5)),
    "K2+K1,3": ((0, 1), (2, 3), (2, 4), (2, 5)),
    "K2+P4": ((0, 1), (2, 3), (3, 4), (4, 5)),
    "K2+K3": ((0, 1), (2, 3), (3, 4), (2, 4)),
    "K1,4": ((0, 1), (0, 2), (0, 3), (0, 4)),
    "K1,3+": ((0, 1), (0, 2), (0, 3), (3, 4)),
    "P5": ((0, 1), (1, 2), (2, 3), (3, 4)),
    "C4": ((0, 1), (1, 2), (2, 3), (0, 3)),
    "K3+": ((0, 1), (1, 2), (0, 2), (0, 3)),
}


def shape_edges(name: str) -> int:
    return len(SHAPES[name])


def shape_vertices(name: str) -> int:
    return len({v for e in SHAPES[name] for v in e})


def shapes_with_edges(r: int) -> list[str]:
    return [name for name, es in SHAPES.items() if len(es) == r]


@dataclass(frozen=True)
class SubgraphCensus:
    counts: Mapping[str, int]
    degree_square_sum: int

    def __getitem__(self, name: str) -> int:
        return self.counts[name]

    def as_dict(self) -> dict[str, int]:
        return dict(self.counts)


def census(g: Graph) -> SubgraphCensus:
    rows = g.rows
    deg = g.degrees
    m = g.m
    edges = list(g.edges())

    cherries = sum(comb(d, 2) for d in deg)
    stars3 = sum(comb(d, 3) for d in deg)
    stars4 = sum(comb(d, 4) for d in deg)

    # triangles through each vertex
    tri_at = [0] * g.n
    codeg = {}
    for u, v in edges:
        c = (rows[u] & rows[v]).bit_count()
        codeg[u, v] = codeg[v, u] = c
        tri_at[u] += c
        tri_at[v] += c
    tri_at = [t // 2 for t in tri_at]
    triangles = sum(tri_at) // 3

    paths3 = sum((deg[u] - 1) * (deg[v] - 1) for u, v in edges) - 3 * triangles
    paws = sum(t * (d - 2) for t, d in zip(tri_at, deg))

    c4_twice = 0
    for u in range(g.n):
        ru = rows[u]
        for v in range(u + 1, g.n):
            c4_twice += comb((ru & rows[v]).bit_count(), 2)
    cycles4 = c4_twice // 2

    # spider: centre c of degree >= 3, long leg c-d-e
    spiders = 0
    for u, v in edges:
        for c, d in ((u, v), (v, u)):
            spiders += (deg[d] - 1) * comb(deg[c] - 1, 2) - codeg[c, d] * (deg[c] - 2)

    # P5 through its middle vertex c with neighbours b != d; paths counted twice
    p5_twice = 0
    for c in range(g.n):
        nb = g.neighbors(c)
        for b in nb:
            for d in nb:
                if b == d:
                    continue
                good = (deg[b] - 1) * (deg[d] - 1)
                if rows[b] >> d & 1:
                    good -= deg[b] + deg[d] - 3
                good -= (rows[b] & rows[d]).bit_count() - 1
                p5_twice += good
    paths4 = p5_twice // 2

    matchings2 = comb(m, 2) - cherries
    k2_cherry = (m - 2) * cherries - 3 * stars3 - 2 * paths3 - 3 * triangles
    matchings3 = comb(m, 3) - stars3 - paths3 - triangles - k2_cherry

    k2_k3 = (m - 3) * triangles - paws
    k2_star3 = (m - 3) * stars3 - 4 * stars4 - spiders - paws
    k2_p4 = (m - 3) * paths3 - 2 * spiders - 2 * paths4 - 4 * cycles4 - 2 * paws
    two_cherries = (
        comb(cherries, 2)
        - 3 * stars3 - paths3 - 3 * triangles
        - 3 * stars4 - spiders - paths4 - 2 * cycles4 - 2 * paws
    )
    num = (
        (m - 3) * k2_cherry - 4 * two_cherries - 3 * k2_star3 - 2 * k2_p4
        - 3 * k2_k3 - spiders - 2 * paths4
    )
    assert num % 2 == 0
    k2k2_cherry = num // 2
    matchings4 = comb(m, 4) - (
        k2k2_cherry + two_cherries + k2_star3 + k2_p4 + k2_k3
        + stars4 + spiders + paths4 + cycles4 + paws
    )

    counts = {
        "K2": m,
        "K1,2": cherries,
        "2K2": matchings2,
        "K3": triangles,
        "P4": paths3,
        "K1,3": stars3,
        "K2+K1,2": k2_cherry,
        "3K2": matchings3,
        "4K2": matchings4,
        "2K2+K1,2": k2k2_cherry,
        "2K1,2": two_cherries,
        "K2+K1,3": k2_star3,
        "K2+P4": k2_p4,
        "K2+K3": k2_k3,
        "K1,4": stars4,
        "K1,3+": spiders,
        "P5": paths4,
        "C4": cycles4,
        "K3+": paws,
    }
    return SubgraphCensus(counts, sum(d * d for d in deg))


# brute force ---------------------------------------------------------------

def classify_edge_set(edges: Iterable[tuple[int, int]]) -> str:
    """Name the shape spanned by at most four edges, by components and degrees."""
    edges = list(edges)
    parent: dict[int, int] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in edges:
        parent[find(u)] = find(v)
    comps: dict[int, list[tuple[int, int]]] = {}
    for e in edges:
        comps.setdefault(find(e[0]), []).append(e)
    parts = sorted((_connected_name(es) for es in comps.values()), key=_part_order)
    counted: dict[str, int] = {}
    for p in parts:
        counted[p] = counted.get(p, 0) + 1
    name = "+".join(p if c == 1 else f"{c}{p}" for p, c in counted.items())
    if name not in SHAPES:
        raise ValueError(f"unrecognised edge set {edges}")
    return name


_PART_ORDER = ["K2", "K1,2", "K1,3", "P4", "K3"]


def _part_order(name: str) -> int:
    return _PART_ORDER.index(name) if name in _PART_ORDER else len(_PART_ORDER)


def _connected_name(edges: list[tuple[int, int]]) -> str:
    deg: dict[int, int] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    key = (len(deg), len(edges), tuple(sorted(deg.values(), reverse=True)))
    return {
        (2, 1, (1, 1)): "K2",
        (3, 2, (2, 1, 1)): "K1,2",
        (3, 3, (2, 2, 2)): "K3",
        (4, 3, (2, 2, 1, 1)): "P4",
        (4, 3, (3, 1, 1, 1)): "K1,3",
        (4, 4, (2, 2, 2, 2)): "C4",
        (4, 4, (3, 2, 2, 1)): "K3+",
        (5, 4, (4, 1, 1, 1, 1)): "K1,4",
        (5, 4, (3, 2, 1, 1, 1)): "K1,3+",
        (5, 4, (2, 2, 2, 1, 1)): "P5",
    }[key]


def brute_force_census(g: Graph) -> dict[str, int]:
    """Classify every edge subset of size 1..4; reference oracle for small graphs."""
    counts = {name: 0 for name in SHAPES}
    edges = list(g.edges())
    for r in range(1, 5):
        for sub in combinations(edges, r):
            counts[classify_edge_set(sub)] += 1
    return counts
