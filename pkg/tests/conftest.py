import numpy as np
import pytest
from hypothesis import strategies as st

from dpne.graph import from_edges


@st.composite
def edge_lists(draw, max_vertices=20, max_extra_edges=40):
    """Random undirected simple graphs as raw edge pairs (at least one edge).

    A random spanning-tree-ish backbone keeps most draws connected enough to
    be interesting; extra random pairs add cycles. Self-loops and duplicates
    are left in deliberately so loader cleaning stays exercised.
    """
    n = draw(st.integers(min_value=2, max_value=max_vertices))
    pairs = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    extra = draw(st.lists(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
        max_size=max_extra_edges))
    return pairs + extra


def graphs_from(pairs):
    return from_edges(np.array(pairs, dtype=np.int64))


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


def random_graph(rng, n, p):
    """Erdos-Renyi-ish helper for oracle tests; guarantees degree >= 1."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    covered = {v for e in pairs for v in e}
    for v in range(n):
        if v not in covered:
            other = (v + 1) % n
            pairs.append((min(v, other), max(v, other)))
            covered.update((v, other))
    return graphs_from(pairs)
