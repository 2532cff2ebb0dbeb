"""Exact and Monte Carlo laws of the induced edge count of a random k-subset."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice
from math import comb, sqrt
from typing import Sequence

import numpy as np

from .combinations import steps, unrank
from .errors import BudgetExceeded, EdgeStatError
from .graph import Graph

DEFAULT_BUDGET = 10**8
MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class EdgeDistribution:
    """Exact counts of k-subsets of an n-vertex graph by induced edge count."""

    n: int
    k: int
    counts: tuple[int, ...]  # indexed by l in [0, C(k,2)]

    @property
    def total(self) -> int:
        return comb(self.n, self.k)

    @property
    def max_edges(self) -> int:
        return comb(self.k, 2)

    def probability_at(self, l: int) -> Fraction:
        return probability_at(self, l)

    def probabilities(self) -> list[Fraction]:
        return [Fraction(c, self.total) for c in self.counts]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "total": str(self.total),
            "counts": [{"l": l, "count": str(c)} for l, c in enumerate(self.counts) if c],
        }

    @classmethod
    def from_json(cls, obj: dict) -> EdgeDistribution:
        n, k = int(obj["n"]), int(obj["k"])
        counts = [0] * (comb(k, 2) + 1)
        for item in obj["counts"]:
            counts[int(item["l"])] = int(item["count"])
        d = cls(n, k, tuple(counts))
        if str(d.total) != str(obj["total"]) or sum(counts) != d.total:
            raise EdgeStatError("distribution counts do not sum to C(n, k)")
        return d

    def csv_rows(self) -> list[tuple[int, int, float]]:
        return [(l, c, c / self.total) for l, c in enumerate(self.counts)]


def probability_at(d: EdgeDistribution, l: int) -> Fraction:
    if not 0 <= l <= d.max_edges:
        raise EdgeStatError(f"l={l} outside [0, {d.max_edges}] for k={d.k}")
    return Fraction(d.counts[l], d.total)


def _check_k(g: Graph, k: int) -> None:
    if not 1 <= k <= g.n:
        raise EdgeStatError(f"need 1 <= k <= n, got k={k}, n={g.n}")


def _walk_histogram(rows: Sequence[int], verts: Sequence[int], k: int, base: int,
                    size: int, start: int, length: int) -> list[int]:
    """Histogram of e(base + S) over ``length`` consecutive k-subsets S of ``verts``.

    ``start`` is the revolving-door rank of the first subset; each later subset
    swaps one vertex, so the running edge count changes by two masked popcounts.
    """
    hist = [0] * size
    c = unrank(start, len(verts), k)
    mask = base
    for i in c:
        mask |= 1 << verts[i]
    e = 0
    r = mask
    while r:
        low = r & -r
        e += (rows[low.bit_length() - 1] & mask).bit_count()
        r ^= low
    e //= 2
    hist[e] += 1
    for out, inn in islice(steps(c, len(verts)), length - 1):
        v = verts[out]
        mask ^= 1 << v
        e -= (rows[v] & mask).bit_count()
        v = verts[inn]
        e += (rows[v] & mask).bit_count()
        mask |= 1 << v
        hist[e] += 1
    return hist


def _walk_chunk(args) -> list[int]:
    return _walk_histogram(*args)


def subset_histogram(g: Graph, verts: Sequence[int], k: int, base: int, size: int,
                     workers: int = 1) -> list[int]:
    total = comb(len(verts), k)
    if workers <= 1 or total < 4096:
        return _walk_histogram(g.rows, verts, k, base, size, 0, total)
    chunks = workers * 4
    bounds = [total * i // chunks for i in range(chunks + 1)]
    jobs = [(g.rows, list(verts), k, base, size, lo, hi - lo)
            for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
    hist = [0] * size
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_walk_chunk, jobs):
            for i, x in enumerate(part):
                hist[i] += x
    return hist


def exact_distribution(g: Graph, k: int, budget: int = DEFAULT_BUDGET,
                       workers: int = 1) -> EdgeDistribution:
    """Count k-subsets by induced edge count, visiting them in single-swap order.

    Raises BudgetExceeded when C(n, k) exceeds ``budget``.  The result does not
    depend on ``workers``: each worker enumerates a contiguous rank range.
    """
    _check_k(g, k)
    total = comb(g.n, k)
    if total > budget:
        raise BudgetExceeded(total, budget)
    hist = subset_histogram(g, range(g.n), k, 0, comb(k, 2) + 1, workers)
    return EdgeDistribution(g.n, k, tuple(hist))


def naive_distribution(g: Graph, k: int) -> EdgeDistribution:
    """Lexicographic enumeration recounting every subset from scratch (oracle)."""
    _check_k(g, k)
    counts = [0] * (comb(k, 2) + 1)
    for sub in combinations(range(g.n), k):
        e = sum(1 for u, v in combinations(sub, 2) if g.has_edge(u, v))
        counts[e] += 1
    return EdgeDistribution(g.n, k, tuple(counts))


# Monte Carlo ---------------------------------------------------------------

@dataclass(frozen=True)
class McEstimate:
    n: int
    k: int
    samples: int
    seed: int
    hits: tuple[int, ...]

    @property
    def estimates(self) -> tuple[float, ...]:
        return tuple(h / self.samples for h in self.hits)

    @property
    def stderr(self) -> tuple[float, ...]:
        return tuple(sqrt(p * (1.0 - p) / self.samples) for p in self.estimates)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "samples": self.samples,
            "seed": self.seed,
            "estimates": [
                {"l": l, "p": p, "stderr": se, "hits": h}
                for l, (p, se, h) in enumerate(zip(self.estimates, self.stderr, self.hits))
                if h
            ],
        }

    def csv_rows(self) -> list[tuple[int, int, float]]:
        return [(l, h, h / self.samples) for l, h in enumerate(self.hits)]


def block_rng(seed: int, block: int) -> np.random.Generator:
    """Generator for sample block ``block``; independent of how blocks are scheduled."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def sample_subsets(n: int, k: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """``size`` uniform k-subsets of range(n) by vectorised partial Fisher-Yates.

    Only the first k positions and the (at most k) swapped-in positions beyond
    them are tracked, so memory is O(size * k) regardless of n.
    """
    rows = np.arange(size)
    prefix = np.tile(np.arange(k, dtype=np.int64), (size, 1))
    far_pos = np.full((size, k), -1, dtype=np.int64)
    far_val = np.zeros((size, k), dtype=np.int64)
    out = np.empty((size, k), dtype=np.int64)
    for i in range(k):
        j = i + rng.integers(0, n - i, size=size)
        near = j < k
        jc = np.where(near, j, 0)
        match = far_pos == j[:, None]
        hit = match.any(axis=1)
        slot = np.where(hit, match.argmax(axis=1), i)
        val_j = np.where(near, prefix[rows, jc], np.where(hit, far_val[rows, slot], j))
        val_i = prefix[rows, i]
        out[:, i] = val_j
        # move the old value at i to position j
        prefix[rows[near], jc[near]] = val_i[near]
        far = ~near
        far_pos[rows[far], slot[far]] = j[far]
        far_val[rows[far], slot[far]] = val_i[far]
        prefix[:, i] = val_j
    return out


def induced_counts(adj: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    k = subsets.shape[1]
    x = np.zeros(subsets.shape[0], dtype=np.int64)
    for a in range(k):
        for b in range(a + 1, k):
            x += adj[subsets[:, a], subsets[:, b]]
    return x


def _mc_block(args) -> np.ndarray:
    adj, k, seed, block, size = args
    rng = block_rng(seed, block)
    subsets = sample_subsets(adj.shape[0], k, size, rng)
    return np.bincount(induced_counts(adj, subsets), minlength=comb(k, 2) + 1)


def mc_distribution(g: Graph, k: int, samples: int, seed: int,
                    workers: int = 1) -> McEstimate:
    """Estimate P(X = l) from ``samples`` uniform k-subsets.

    Samples are split into fixed-size blocks, each with its own substream of
    ``seed``, so the estimate is identical for any ``workers``.
    """
    _check_k(g, k)
    if samples < 1:
        raise EdgeStatError("samples must be >= 1")
    if seed is None:
        raise EdgeStatError("Monte Carlo requires a seed")
    adj = g.to_numpy(np.int64)
    jobs = []
    done = 0
    block = 0
    while done < samples:
        size = min(MC_BLOCK, samples - done)
        jobs.append((adj, k, seed, block, size))
        done += size
        block += 1
    hist = np.zeros(comb(k, 2) + 1, dtype=np.int64)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_mc_block, jobs):
                hist += part
    else:
        for job in jobs:
            hist += _mc_block(job)
    return McEstimate(g.n, k, samples, seed, tuple(int(h) for h in hist))


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))
