"""Simple undirected graphs stored as adjacency bit rows.

Row ``rows[u]`` is a Python int whose bit ``v`` is set iff ``uv`` is an edge.
Neighbourhood intersections and degrees into a vertex set are then a single
``&`` followed by ``int.bit_count``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EdgeStatError, Graph6Error

__all__ = [
    "Graph",
    "parse_graph6",
    "write_graph6",
    "complement",
    "construct",
    "clique_union",
    "complete_bipartite",
    "two_cliques",
    "gnp",
    "empty_graph",
    "complete_graph",
    "path_graph",
    "cycle_graph",
    "star_graph",
    "perfect_matching",
    "pair_index",
    "symm_diff_sum",
]


@dataclass(frozen=True)
class Graph:
    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise EdgeStatError(f"graph needs at least one vertex, got n={self.n}")
        if len(self.rows) != self.n:
            raise EdgeStatError("need exactly one adjacency row per vertex")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.rows):
            if row & ~full:
                raise EdgeStatError(f"row {u} has bits beyond vertex {self.n - 1}")
            if row >> u & 1:
                raise EdgeStatError(f"loop at vertex {u}")
            r = row
            while r:
                low = r & -r
                v = low.bit_length() - 1
                if not self.rows[v] >> u & 1:
                    raise EdgeStatError(f"adjacency not symmetric at ({u}, {v})")
                r ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise EdgeStatError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise EdgeStatError(f"edge ({u}, {v}) out of range for n={n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @classmethod
    def from_adjacency(cls, matrix) -> Graph:
        a = np.asarray(matrix)
        n = a.shape[0]
        rows = []
        for u in range(n):
            r = 0
            for v in np.flatnonzero(a[u]):
                r |= 1 << int(v)
            rows.append(r)
        return cls(n, tuple(rows))

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(r.bit_count() for r in self.rows)

    @cached_property
    def m(self) -> int:
        return sum(self.degrees) // 2

    @property
    def max_degree(self) -> int:
        return max(self.degrees)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.rows[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.rows):
            for v in _bits(row >> (u + 1)):
                yield u, u + 1 + v

    def codegree(self, u: int, v: int) -> int:
        return (self.rows[u] & self.rows[v]).bit_count()

    def induced_edges(self, mask: int) -> int:
        """Number of edges with both endpoints in the vertex bitmask."""
        total = 0
        r = mask
        while r:
            low = r & -r
            total += (self.rows[low.bit_length() - 1] & mask).bit_count()
            r ^= low
        return total // 2

    def delete_vertex(self, v: int) -> Graph:
        low = (1 << v) - 1
        rows = []
        for u, row in enumerate(self.rows):
            if u == v:
                continue
            rows.append((row & low) | ((row >> (v + 1)) << v))
        return Graph(self.n - 1, tuple(rows))

    def to_numpy(self, dtype=np.uint8) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1
        return a

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, g6={write_graph6(self)!r})"


def _bits(x: int) -> list[int]:
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


def pair_index(u: int, v: int) -> int:
    """Position of pair {u, v} in graph6 (column-major upper triangle) order."""
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


# graph6 -----------------------------------------------------------------

def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(63 + n)
    if n <= 258047:
        return "~" + "".join(chr(63 + (n >> s & 63)) for s in (12, 6, 0))
    if n <= 68719476735:
        return "~~" + "".join(chr(63 + (n >> s & 63)) for s in (30, 24, 18, 12, 6, 0))
    raise Graph6Error(f"n={n} too large for graph6")


def write_graph6(g: Graph) -> str:
    """Encode ``g`` as graph6, preserving vertex order (no canonical labelling)."""
    bits = []
    for v in range(1, g.n):
        row = g.rows[v]
        for u in range(v):
            bits.append(row >> u & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = val << 1 | b
        body.append(chr(63 + val))
    return _encode_n(g.n) + "".join(body)


def parse_graph6(text: str) -> Graph:
    s = text.rstrip("\r\n")
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6Error("empty graph6 string")
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"byte {ord(ch)} at offset {pos} outside [63, 126]")
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] < 63:
        n, body = vals[0], vals[1:]
    elif len(vals) >= 2 and vals[1] == 63:
        if len(vals) < 8:
            raise Graph6Error("truncated 8-byte size header")
        n = 0
        for x in vals[2:8]:
            n = n << 6 | x
        body = vals[8:]
    else:
        if len(vals) < 4:
            raise Graph6Error("truncated 4-byte size header")
        n = 0
        for x in vals[1:4]:
            n = n << 6 | x
        body = vals[4:]
    if n < 1:
        raise Graph6Error("graph6 encodes n=0; at least one vertex is required")
    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    if len(body) < need:
        raise Graph6Error(f"truncated bit stream: need {need} data bytes, got {len(body)}")
    if len(body) > need:
        raise Graph6Error(f"{len(body) - need} trailing bytes after bit stream")
    pad = need * 6 - nbits
    if pad and body[-1] & ((1 << pad) - 1):
        raise Graph6Error("nonzero padding bits")
    rows = [0] * n
    idx = 0
    for v in range(1, n):
        for u in range(v):
            byte, off = divmod(idx, 6)
            if body[byte] >> (5 - off) & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            idx += 1
    return Graph(n, tuple(rows))


# transformations and constructions --------------------------------------

def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple(full & ~row & ~(1 << u) for u, row in enumerate(g.rows)))


def _clique_rows(n: int, parts: Sequence[int]) -> tuple[int, ...]:
    rows = [0] * n
    start = 0
    for size in parts:
        block = ((1 << size) - 1) << start
        for v in range(start, start + size):
            rows[v] = block & ~(1 << v)
        start += size
    return tuple(rows)


def clique_union(n: int, t: int) -> Graph:
    """``t`` vertex-disjoint cliques on ``n`` vertices, sizes as equal as possible.

    Larger cliques come first.
    """
    if t < 1 or t > n:
        raise EdgeStatError(f"clique_union needs 1 <= t <= n, got t={t}, n={n}")
    q, r = divmod(n, t)
    return Graph(n, _clique_rows(n, [q + 1] * r + [q] * (t - r)))


def two_cliques(n: int) -> Graph:
    """K_ceil(n/2) + K_floor(n/2), the complement of the balanced complete bipartite graph."""
    if n < 1:
        raise EdgeStatError(f"two_cliques needs n >= 1, got {n}")
    return Graph(n, _clique_rows(n, [(n + 1) // 2, n // 2]))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 0 or b < 0 or a + b < 1:
        raise EdgeStatError(f"complete_bipartite needs non-negative sizes, got ({a}, {b})")
    left = (1 << a) - 1
    right = ((1 << b) - 1) << a
    return Graph(a + b, tuple([right] * a + [left] * b))


def gnp(n: int, p: float, seed) -> Graph:
    """Erdős–Rényi G(n, p); the same (n, p, seed) always gives the same graph."""
    if n < 1:
        raise EdgeStatError(f"gnp needs n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise EdgeStatError(f"gnp needs 0 <= p <= 1, got {p}")
    if seed is None:
        raise EdgeStatError("gnp requires a seed")
    rng = np.random.default_rng(seed)
    hits = rng.random(n * (n - 1) // 2) < p
    rows = [0] * n
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if hits[idx]:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            idx += 1
    return Graph(n, tuple(rows))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_graph(n: int) -> Graph:
    return Graph(n, _clique_rows(n, [n]))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise EdgeStatError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def perfect_matching(n: int) -> Graph:
    if n % 2:
        raise EdgeStatError("perfect matching needs even n")
    return Graph.from_edges(n, [(2 * i, 2 * i + 1) for i in range(n // 2)])


_CONSTRUCTORS = {
    "clique_union": (clique_union, (int, int)),
    "complete_bipartite": (complete_bipartite, (int, int)),
    "two_cliques": (two_cliques, (int,)),
    "gnp": (gnp, (int, float)),
    "empty": (empty_graph, (int,)),
    "complete": (complete_graph, (int,)),
    "path": (path_graph, (int,)),
    "cycle": (cycle_graph, (int,)),
    "star": (star_graph, (int,)),
    "matching": (perfect_matching, (int,)),
}

CONSTRUCTION_KINDS = tuple(_CONSTRUCTORS)


def construct(kind: str, params: Sequence, seed=None) -> Graph:
    """Build a named construction, e.g. ``construct("clique_union", (12, 3))``."""
    try:
        fn, types = _CONSTRUCTORS[kind]
    except KeyError:
        raise EdgeStatError(
            f"unknown construction {kind!r}; choose from {', '.join(CONSTRUCTION_KINDS)}"
        ) from None
    if len(params) != len(types):
        raise EdgeStatError(f"{kind} takes {len(types)} parameter(s), got {len(params)}")
    try:
        args = [t(x) for t, x in zip(types, params)]
    except ValueError as exc:
        raise EdgeStatError(f"bad parameter for {kind}: {exc}") from None
    if kind == "gnp":
        return gnp(*args, seed=seed)
    return fn(*args)


def parse_construction(text: str) -> tuple[str, list[str]]:
    """Split the compact ``name:param,param`` form."""
    kind, _, rest = text.partition(":")
    params = [p for p in rest.split(",") if p] if rest else []
    return kind.strip(), [p.strip() for p in params]


def symm_diff_sum(g: Graph) -> int:
    """Sum over unordered vertex pairs of |N(u) xor N(v)|, computed pair by pair."""
    total = 0
    rows = g.rows
    for u in range(g.n):
        ru = rows[u]
        for v in range(u + 1, g.n):
            total += (ru ^ rows[v]).bit_count()
    return total
