from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from edgestat.graph import Graph, gnp


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 9) -> Graph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for v in range(1, n) for u in range(v)]
    bits = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, b in zip(pairs, bits) if b])


def seeded_graphs(count: int, max_n: int, seed: int = 0, min_n: int = 1) -> list[Graph]:
    out = []
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        n = int(rng.integers(min_n, max_n + 1))
        out.append(gnp(n, float(rng.random()), seed=[seed, i, 1]))
    return out


@pytest.fixture
def k4():
    from edgestat.graph import complete_graph

    return complete_graph(4)
