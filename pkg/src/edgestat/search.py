"""Maximising P(X_{G,k} = l) over n-vertex graphs.

Three routes produce :class:`SearchRecord` values: exhaustive enumeration of
labelled graphs for n <= 8, a fixed catalogue of constructions, and a
hill-climbing search mixing edge flips with Zykov symmetrisation.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from pathlib import Path

import numpy as np

from .distribution import (
    DEFAULT_BUDGET,
    exact_distribution,
    induced_counts,
    sample_subsets,
    subset_histogram,
)
from .errors import EdgeStatError, Graph6Error, RecordsError
from .graph import (
    Graph,
    clique_union,
    complete_bipartite,
    gnp,
    pair_index,
    parse_graph6,
    two_cliques,
    write_graph6,
)
from .moments import fmt

BRUTE_FORCE_MAX_N = 8
SEARCH_MC_SAMPLES = 10**5


@dataclass(frozen=True)
class SearchRecord:
    n: int
    k: int
    l: int
    density: Fraction
    graph: str
    method: str
    iterations: int = 0
    seed: int | None = None
    exact: bool = True

    @property
    def edges(self) -> int:
        return parse_graph6(self.graph).m

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "l": self.l,
            "density": fmt(self.density),
            "density_real": float(self.density),
            "graph": self.graph,
            "method": self.method,
            "iterations": self.iterations,
            "seed": self.seed,
            "exact": self.exact,
        }

    @classmethod
    def from_json(cls, obj: dict) -> SearchRecord:
        density = Fraction(obj["density"])
        if not 0 <= density <= 1:
            raise RecordsError(f"density {density} outside [0, 1]")
        rec = cls(int(obj["n"]), int(obj["k"]), int(obj["l"]), density, str(obj["graph"]),
                  str(obj["method"]), int(obj.get("iterations", 0)), obj.get("seed"),
                  bool(obj.get("exact", True)))
        g = parse_graph6(rec.graph)
        if g.n != rec.n:
            raise RecordsError(f"graph has {g.n} vertices, record says n={rec.n}")
        return rec

    def better_than(self, other: SearchRecord) -> bool:
        if self.density != other.density:
            return self.density > other.density
        return self.edges < other.edges


def _check_params(n: int, k: int, l: int) -> None:
    if not 1 <= k <= n:
        raise EdgeStatError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not 0 <= l <= comb(k, 2):
        raise EdgeStatError(f"need 0 <= l <= C(k,2) = {comb(k, 2)}, got l={l}")


def density_of(g: Graph, k: int, l: int, budget: int = DEFAULT_BUDGET) -> Fraction:
    return exact_distribution(g, k, budget).probability_at(l)


# exhaustive search -------------------------------------------------------------

def _mask_graph(n: int, mask: int) -> Graph:
    rows = [0] * n
    for v in range(1, n):
        for u in range(v):
            if mask >> pair_index(u, v) & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return Graph(n, tuple(rows))


@lru_cache(maxsize=16)
def brute_force_table(n: int, prune: bool = True) -> dict[tuple[int, int], tuple[int, int]]:
    """Best (count, witness edge mask) for every (k, l), over all labelled n-vertex graphs.

    Bit ``pair_index(u, v)`` of a mask is the pair uv.  With ``prune`` only
    labellings whose degrees are non-increasing in vertex index are scanned;
    every graph has such a labelling, so maxima are unchanged.
    """
    if not 1 <= n <= BRUTE_FORCE_MAX_N:
        raise EdgeStatError(
            f"brute force supports n <= {BRUTE_FORCE_MAX_N}, got n={n}; use local_search"
        )
    npairs = comb(n, 2)
    masks = np.arange(1 << npairs, dtype=np.uint32)
    if prune and n > 1:
        degs = []
        for v in range(n):
            star = 0
            for u in range(n):
                if u != v:
                    star |= 1 << pair_index(u, v)
            degs.append(np.bitwise_count(masks & np.uint32(star)))
        keep = np.ones(masks.shape, dtype=bool)
        for v in range(n - 1):
            keep &= degs[v] >= degs[v + 1]
        masks = masks[keep]
    sizes = np.bitwise_count(masks).astype(np.int64)
    rows = np.arange(masks.size)
    table = {}
    for k in range(1, n + 1):
        hist = np.zeros((masks.size, comb(k, 2) + 1), dtype=np.int32)
        for sub in combinations(range(n), k):
            inner = 0
            for u, v in combinations(sub, 2):
                inner |= 1 << pair_index(u, v)
            hist[rows, np.bitwise_count(masks & np.uint32(inner))] += 1
        for l in range(comb(k, 2) + 1):
            col = hist[:, l]
            best = int(col.max())
            cand = np.flatnonzero(col == best)
            # fewest edges, then smallest mask
            order = np.lexsort((masks[cand], sizes[cand]))
            table[k, l] = (best, int(masks[cand[order[0]]]))
    return table


def brute_force_extremal(n: int, k: int, l: int, prune: bool = True) -> SearchRecord:
    """Exact I(n, k, l) with a witness graph, by scanning all labelled graphs."""
    if n > BRUTE_FORCE_MAX_N:
        raise EdgeStatError(
            f"brute force supports n <= {BRUTE_FORCE_MAX_N} (2^C(n,2) graphs); "
            "use local_search for larger n"
        )
    _check_params(n, k, l)
    count, mask = brute_force_table(n, prune)[k, l]
    g = _mask_graph(n, mask)
    return SearchRecord(n, k, l, Fraction(count, comb(n, k)), write_graph6(g), "brute_force",
                        iterations=1 << comb(n, 2))


# symmetrisation ----------------------------------------------------------------

@dataclass(frozen=True)
class VertexDensity:
    value: Fraction
    exact: bool
    samples: int | None = None


def conditional_vertex_density(g: Graph, k: int, l: int, v: int,
                               budget: int = DEFAULT_BUDGET, samples: int = SEARCH_MC_SAMPLES,
                               seed: int = 0) -> VertexDensity:
    """P(X = l | v in A), exactly by enumerating (k-1)-subsets of V - v.

    Over budget, falls back to Monte Carlo and returns ``exact=False``.
    """
    _check_params(g.n, k, l)
    others = [u for u in range(g.n) if u != v]
    total = comb(g.n - 1, k - 1)
    if total <= budget:
        hist = subset_histogram(g, others, k - 1, 1 << v, comb(k, 2) + 1)
        return VertexDensity(Fraction(hist[l], total), True)
    rng = np.random.default_rng([seed, v])
    picks = np.asarray(others)[sample_subsets(g.n - 1, k - 1, samples, rng)]
    subsets = np.concatenate([np.full((samples, 1), v), picks], axis=1)
    hits = int((induced_counts(g.to_numpy(np.int64), subsets) == l).sum())
    return VertexDensity(Fraction(hits, samples), False, samples)


def twin_replace(g: Graph, keep: int, drop: int) -> Graph:
    """Delete ``drop`` and put a non-adjacent twin of ``keep`` in its place."""
    if keep == drop:
        raise EdgeStatError("twin and deleted vertex must differ")
    nb = g.rows[keep] & ~(1 << drop)
    rows = []
    for u, row in enumerate(g.rows):
        if u == drop:
            rows.append(nb)
            continue
        row &= ~(1 << drop)
        if nb >> u & 1:
            row |= 1 << drop
        rows.append(row)
    return Graph(g.n, tuple(rows))


def pick_extremes(values) -> tuple[int, int]:
    """(argmax, argmin) with lowest-index tie-break; argmin avoids argmax."""
    hi = max(range(len(values)), key=lambda i: (values[i], -i))
    lo = min((i for i in range(len(values)) if i != hi), key=lambda i: (values[i], i))
    return hi, lo


def symmetrization_step(g: Graph, k: int, l: int, budget: int = DEFAULT_BUDGET) -> Graph:
    """Replace the vertex least likely to sit in an l-edge k-set by a twin of the most likely."""
    if g.n < 2:
        raise EdgeStatError("symmetrization needs n >= 2")
    dens = [conditional_vertex_density(g, k, l, v, budget).value for v in range(g.n)]
    hi, lo = pick_extremes(dens)
    return twin_replace(g, hi, lo)


# constructions -----------------------------------------------------------------

def construction_catalog(n: int, k: int, l: int) -> list[tuple[str, int | None, Graph]]:
    """(kind, seed, graph) triples tried by :func:`construction_bound`."""
    out = [("two_cliques", None, two_cliques(n))]
    if n >= 2:
        a = min(max(1, round(n / k)), n - 1)
        out.append(("complete_bipartite", None, complete_bipartite(a, n - a)))
    out.append(("clique_union", None, clique_union(n, min(comb(k, 2), n))))
    p = l / comb(k, 2) if k >= 2 else 0.0
    for s in range(20):
        out.append(("gnp", s, gnp(n, p, seed=s)))
    return out


def _evaluate(g: Graph, k: int, l: int, budget: int, samples: int, seed: int
              ) -> tuple[Fraction, bool]:
    if comb(g.n, k) <= budget:
        return density_of(g, k, l, budget), True
    rng = np.random.default_rng(seed)
    subsets = sample_subsets(g.n, k, samples, rng)
    hits = int((induced_counts(g.to_numpy(np.int64), subsets) == l).sum())
    return Fraction(hits, samples), False


def construction_bound(n: int, k: int, l: int, budget: int = DEFAULT_BUDGET,
                       samples: int = SEARCH_MC_SAMPLES) -> SearchRecord:
    """Best catalogue construction; a certified lower bound on I(n, k, l) when exact."""
    _check_params(n, k, l)
    best = None
    catalog = construction_catalog(n, k, l)
    for kind, seed, g in catalog:
        dens, exact = _evaluate(g, k, l, budget, samples, seed=0)
        rec = SearchRecord(n, k, l, dens, write_graph6(g), f"construction:{kind}",
                           seed=seed, exact=exact)
        if best is None or rec.better_than(best):
            best = rec
    return replace(best, iterations=len(catalog))


# local search ------------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 4
    exact_limit: int = 2 * 10**7  # max C(n,k) * C(k,2) for exact evaluation
    mc_samples: int = SEARCH_MC_SAMPLES
    symmetrize_prob: float = 0.1
    use_constructions: bool = True
    workers: int = 1


class DensityEvaluator:
    """Counts l-edge k-subsets over a fixed subset list.

    The list is every k-subset when small enough (exact), else a fixed Monte
    Carlo sample reused for every evaluation, so comparisons between moves
    see common random numbers.
    """

    def __init__(self, n: int, k: int, l: int, config: SearchConfig, seed: int):
        self.n, self.k, self.l = n, k, l
        total = comb(n, k)
        self.exact = total * max(1, comb(k, 2)) <= config.exact_limit
        if self.exact:
            subsets = np.array(list(combinations(range(n), k)), dtype=np.int64).reshape(total, k)
        else:
            rng = np.random.default_rng([seed, 0xC0FFEE])
            subsets = sample_subsets(n, k, config.mc_samples, rng)
        self.subsets = subsets
        self.denominator = subsets.shape[0]
        cols = []
        for a in range(k):
            for b in range(a + 1, k):
                lo = np.minimum(subsets[:, a], subsets[:, b])
                hi = np.maximum(subsets[:, a], subsets[:, b])
                cols.append(hi * (hi - 1) // 2 + lo)
        self.pairs = np.stack(cols, axis=1) if cols else np.zeros((self.denominator, 0), np.int64)
        self.contain = np.bincount(subsets.ravel(), minlength=n)

    def hits_mask(self, edgevec: np.ndarray) -> np.ndarray:
        x = edgevec[self.pairs].sum(axis=1) if self.pairs.shape[1] else np.zeros(self.denominator)
        return x == self.l

    def hits(self, edgevec: np.ndarray) -> int:
        return int(self.hits_mask(edgevec).sum())

    def vertex_densities(self, edgevec: np.ndarray) -> list[Fraction]:
        sel = self.subsets[self.hits_mask(edgevec)]
        per = np.bincount(sel.ravel(), minlength=self.n)
        return [Fraction(int(h), int(c)) if c else Fraction(0) for h, c in zip(per, self.contain)]


def _edgevec(g: Graph) -> np.ndarray:
    vec = np.zeros(comb(g.n, 2), dtype=np.int64)
    for u, v in g.edges():
        vec[pair_index(u, v)] = 1
    return vec


def _vec_graph(n: int, vec: np.ndarray) -> Graph:
    pairs = [(u, v) for v in range(1, n) for u in range(v)]
    rows = [0] * n
    for idx in np.flatnonzero(vec):
        u, v = pairs[idx]
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def _restart(args) -> tuple[int, int, bytes, int]:
    n, k, l, steps, seed, r, start_g6, config = args
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(r,))))
    ev = DensityEvaluator(n, k, l, config, seed)
    if start_g6 is not None:
        g = parse_graph6(start_g6)
    else:
        p = l / comb(k, 2) if k >= 2 else 0.0
        g = gnp(n, p, seed=int(rng.integers(2**63)))
    vec = _edgevec(g)
    cur = ev.hits(vec)
    best_hits, best_vec = cur, vec.copy()
    npairs = vec.size
    evals = 1
    for _ in range(steps):
        if n >= 2 and rng.random() < config.symmetrize_prob:
            hi, lo = pick_extremes(ev.vertex_densities(vec))
            cand = _edgevec(twin_replace(_vec_graph(n, vec), hi, lo))
        elif npairs:
            cand = vec.copy()
            cand[int(rng.integers(npairs))] ^= 1
        else:
            break
        h = ev.hits(cand)
        evals += 1
        if h >= cur:
            vec, cur = cand, h
            if h > best_hits or (h == best_hits and vec.sum() < best_vec.sum()):
                best_hits, best_vec = h, vec.copy()
    return best_hits, ev.denominator, best_vec.astype(np.uint8).tobytes(), evals


def local_search(n: int, k: int, l: int, budget: int = 2000, seed: int = 0,
                 config: SearchConfig | None = None) -> SearchRecord:
    """Multi-restart hill climbing on P(X = l); moves are edge flips and symmetrisation.

    A move is kept iff the count of l-edge k-subsets does not drop.  ``budget``
    is the total number of move evaluations, split evenly over restarts.
    Restart 0 starts from the best catalogue construction when enabled.
    """
    _check_params(n, k, l)
    config = config or SearchConfig()
    if seed is None:
        raise EdgeStatError("local_search requires a seed")
    per = max(1, budget // config.restarts)
    start = None
    if config.use_constructions:
        start = construction_bound(n, k, l, samples=config.mc_samples).graph
    jobs = [(n, k, l, per, seed, r, start if r == 0 else None, config)
            for r in range(config.restarts)]
    if config.workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_restart, jobs))
    else:
        results = [_restart(j) for j in jobs]
    best = None
    total_evals = 0
    for hits, denom, raw, evals in results:
        total_evals += evals
        vec = np.frombuffer(raw, dtype=np.uint8).astype(np.int64)
        key = (hits, -int(vec.sum()))
        if best is None or key > best[0]:
            best = (key, hits, denom, vec)
    _, hits, denom, vec = best
    g = _vec_graph(n, vec)
    exact = denom == comb(n, k)
    return SearchRecord(n, k, l, Fraction(hits, denom), write_graph6(g), "local_search",
                        iterations=total_evals, seed=seed, exact=exact)


# records store -----------------------------------------------------------------

DEFAULT_RECORDS = "edgestat_records.jsonl"


def records_path(path: str | os.PathLike | None = None) -> Path:
    return Path(path or os.environ.get("EDGESTAT_RECORDS") or DEFAULT_RECORDS)


class RecordsStore:
    """Best-known record per (n, k, l), persisted as JSON lines."""

    def __init__(self, path: str | os.PathLike | None = None):
        self.path = records_path(path)
        self.records: dict[tuple[int, int, int], SearchRecord] = {}
        self._lock = threading.Lock()
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rec = SearchRecord.from_json(json.loads(line))
                except (ValueError, KeyError, TypeError, ZeroDivisionError, Graph6Error) as exc:
                    raise RecordsError(f"{self.path}:{lineno}: corrupt record: {exc}") from None
                self._insert(rec)

    def _insert(self, rec: SearchRecord) -> bool:
        key = (rec.n, rec.k, rec.l)
        old = self.records.get(key)
        if old is None or rec.better_than(old):
            self.records[key] = rec
            return True
        return False

    def insert(self, rec: SearchRecord) -> bool:
        """Keep ``rec`` iff it beats the stored density, or ties it with fewer edges."""
        with self._lock:
            return self._insert(rec)

    def get(self, n: int, k: int, l: int) -> SearchRecord | None:
        return self.records.get((n, k, l))

    def save(self) -> None:
        with self._lock:
            tmp = self.path.with_name(self.path.name + ".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                for key in sorted(self.records):
                    fh.write(json.dumps(self.records[key].to_json(), sort_keys=True) + "\n")
            os.replace(tmp, self.path)

    def __len__(self) -> int:
        return len(self.records)
