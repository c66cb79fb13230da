"""Degree-penalized random walks and the walk -> skip-gram pipeline.

A step from vertex i lands on j with probability proportional to
C'_ij / (deg_i * deg_j)^beta, so the support is the neighbors plus the
two-hop vertices sharing a common neighbor, and high-degree targets are
suppressed. The baseline mode walks uniformly over the adjacency instead.
Per-vertex alias tables are built lazily and cached; precomputing every row
is memory-heavy because hub rows are large.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embedding import Embedding
from .graph import Graph, proximity_row
from .skipgram import SkipGramConfig, train_skipgram

log = logging.getLogger(__name__)

MODES = ("dp-walker", "deepwalk-baseline")

# stream tags keep the derived RNGs for walk sampling and start-vertex
# shuffling independent of each other under one global seed
_STREAM_WALK = 0
_STREAM_ORDER = 1


@dataclass(frozen=True)
class WalkConfig:
    walks_per_vertex: int = 10
    walk_length: int = 40
    beta: float = 1.0
    seed: int = 0
    mode: str = "dp-walker"

    def __post_init__(self):
        if self.walks_per_vertex < 1:
            raise ValueError("walks_per_vertex must be >= 1")
        if self.walk_length < 2:
            raise ValueError("walk_length must be >= 2")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass
class WalkCorpus:
    """Vertex-id walks plus per-vertex occurrence counts."""

    walks: list[np.ndarray]
    vertex_frequency: np.ndarray

    @property
    def n(self) -> int:
        return self.vertex_frequency.size

    @property
    def total_tokens(self) -> int:
        return int(self.vertex_frequency.sum())

    def dump(self, dest, labels=None) -> None:
        """One walk per line, space-separated (original labels if given)."""
        if isinstance(dest, (str, Path)):
            with open(dest, "w", encoding="utf-8") as fh:
                self.dump(fh, labels)
                return
        for walk in self.walks:
            ids = walk if labels is None else np.asarray(labels)[walk]
            dest.write(" ".join(str(int(v)) for v in ids) + "\n")


def transition_weights(g: Graph, beta: float, v: int) -> tuple[np.ndarray, np.ndarray]:
    """Unnormalized degree-penalized step weights out of vertex v."""
    support, counts = proximity_row(g, v)
    weights = counts / (float(g.degree[v]) * g.degree[support].astype(np.float64)) ** beta
    return support, weights

def transition_distribution(g: Graph, beta: float, v: int) -> dict[int, float]:
    """Exact step distribution out of v under the degree-penalized law."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex id {v} out of range")
    support, weights = transition_weights(g, beta, v)
    probs = weights / weights.sum()
    return {int(s): float(p) for s, p in zip(support, probs)}


def build_alias_table(probs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vose alias construction: O(1) categorical draws after O(s) setup."""
    s = probs.size
    scaled = probs * s
    accept = np.empty(s, dtype=np.float32)
    alias = np.zeros(s, dtype=np.int32)
    small = [i for i in range(s) if scaled[i] < 1.0]
    large = [i for i in range(s) if scaled[i] >= 1.0]
    while small and large:
        i = small.pop()
        j = large[-1]
        accept[i] = scaled[i]
        alias[i] = j
        scaled[j] -= 1.0 - scaled[i]
        if scaled[j] < 1.0:
            large.pop()
            small.append(j)
    for rest in (large, small):  # numerical leftovers get probability 1
        for i in rest:
            accept[i] = 1.0
            alias[i] = i
    return accept, alias


class TransitionSampler:
    """Lazily cached alias tables over the degree-penalized transition law."""

    def __init__(self, g: Graph, beta: float):
        self.g = g
        self.beta = float(beta)
        self._tables: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def table(self, v: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        entry = self._tables.get(v)
        if entry is None:
            support, weights = transition_weights(self.g, self.beta, v)
            accept, alias = build_alias_table(weights / weights.sum())
            entry = (support.astype(np.int32), accept, alias)
            self._tables[v] = entry
        return entry

    def step(self, v: int, u1: float, u2: float) -> int:
        support, accept, alias = self.table(v)
        i = int(u1 * support.size)
        if u2 >= accept[i]:
            i = alias[i]
        return int(support[i])


class UniformSampler:
    """Plain uniform-neighbor steps (the baseline walk law)."""

    def __init__(self, g: Graph):
        self.g = g

    def step(self, v: int, u1: float, u2: float) -> int:
        nbrs = self.g.neighbors(v)
        return int(nbrs[int(u1 * nbrs.size)])


def _walk_rng(seed: int, pass_idx: int, start: int) -> np.random.Generator:
    # one stream per (pass, start vertex): results don't depend on worker count
    return np.random.default_rng(
        np.random.SeedSequence((seed, _STREAM_WALK, pass_idx, start)))


def generate_walks(g: Graph, wcfg: WalkConfig) -> WalkCorpus:
    """walks_per_vertex walks of walk_length vertices from every vertex.

    Start order is a seeded shuffle per pass; each walk draws from its own
    derived RNG stream.
    """
    sampler = (TransitionSampler(g, wcfg.beta) if wcfg.mode == "dp-walker"
               else UniformSampler(g))
    steps = wcfg.walk_length - 1
    walks: list[np.ndarray] = []
    for pass_idx in range(wcfg.walks_per_vertex):
        order_rng = np.random.default_rng(
            np.random.SeedSequence((wcfg.seed, _STREAM_ORDER, pass_idx)))
        for start in order_rng.permutation(g.n):
            start = int(start)
            u = _walk_rng(wcfg.seed, pass_idx, start).random((steps, 2))
            walk = np.empty(wcfg.walk_length, dtype=np.int32)
            walk[0] = cur = start
            for t in range(steps):
                cur = sampler.step(cur, u[t, 0], u[t, 1])
                walk[t + 1] = cur
            walks.append(walk)
    freq = np.bincount(np.concatenate(walks), minlength=g.n).astype(np.int64)
    return WalkCorpus(walks=walks, vertex_frequency=freq)


def embed_walker(g: Graph, wcfg: WalkConfig, scfg: SkipGramConfig) -> Embedding:
    """Generate the walk corpus and fit skip-gram vectors on it."""
    corpus = generate_walks(g, wcfg)
    log.info("walk corpus: %d walks, %d tokens", len(corpus.walks), corpus.total_tokens)
    return train_skipgram(corpus, scfg, labels=g.labels).embedding
