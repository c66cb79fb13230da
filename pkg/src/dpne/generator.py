"""Preferential-attachment generator for synthetic scale-free graphs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, _graph_from_unique_edges


@dataclass(frozen=True)
class PaConfig:
    """Preferential-attachment parameters: n vertices, m edges per arrival."""

    n: int
    m: int
    seed: int = 0

    def __post_init__(self):
        if not (self.n > self.m >= 1):
            raise ValueError(f"require n > m >= 1, got n={self.n} m={self.m}")


def expected_edge_count(cfg: PaConfig) -> int:
    """Exact edge count: seed clique of m+1 vertices plus m per later arrival."""
    return cfg.m * (cfg.m + 1) // 2 + (cfg.n - cfg.m - 1) * cfg.m


def generate_pa(cfg: PaConfig) -> Graph:
    """Grow a connected simple graph by preferential attachment.

    Starts from a complete graph on m+1 vertices so the attachment
    distribution is well defined from the first arrival. Each new vertex
    attaches m distinct edges, targets drawn proportionally to current degree
    via a uniform draw over the flattened edge-endpoint list; duplicate
    targets within one arrival are re-drawn.
    """
    n, m = cfg.n, cfg.m
    rng = np.random.default_rng(cfg.seed)

    total_edges = expected_edge_count(cfg)
    edges = np.empty((total_edges, 2), dtype=np.int64)
    # endpoint list: every edge contributes both ends, so a uniform position
    # picks a vertex with probability proportional to its degree
    endpoints = np.empty(2 * total_edges, dtype=np.int64)

    e = 0
    for i in range(m + 1):
        for j in range(i):
            edges[e] = (j, i)
            endpoints[2 * e] = j
            endpoints[2 * e + 1] = i
            e += 1

    for v in range(m + 1, n):
        targets: set[int] = set()
        while len(targets) < m:
            t = int(endpoints[rng.integers(0, 2 * e)])
            targets.add(t)
        for t in sorted(targets):
            edges[e] = (t, v)
            endpoints[2 * e] = t
            endpoints[2 * e + 1] = v
            e += 1

    labels = np.arange(n, dtype=np.int64)
    return _graph_from_unique_edges(edges, labels)
