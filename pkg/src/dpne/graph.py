"""Undirected graph container, edge-list I/O, and degree-penalized proximity matrices.

The weight matrices defined here feed both embedding algorithms:

* ``C``:  common-neighbor counts, ``C = A^T A - diag(A^T A)``
* ``C'``: second-order plus first-order proximity, ``C' = C + A``
* ``W``:  degree-penalized weights, ``W_ij = C'_ij / (deg_i * deg_j)^beta``
"""
from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)


class EdgeListParseError(ValueError):
    """A malformed edge-list line. Carries the 1-based line number."""

    def __init__(self, line_no: int, line: str, reason: str):
        self.line_no = line_no
        self.line = line
        super().__init__(f"line {line_no}: {reason}: {line!r}")


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph in compressed sparse adjacency form.

    Vertices carry dense 0-based ids internally. ``labels[i]`` is the original
    external label of vertex ``i``; ``id_map`` goes the other way. Both edge
    directions are stored, rows are sorted, and every vertex has degree >= 1.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    degree: np.ndarray
    labels: np.ndarray
    id_map: dict[int, int] = field(repr=False)

    def __post_init__(self):
        for arr in (self.indptr, self.indices, self.degree, self.labels):
            arr.setflags(write=False)
        if self.n == 0:
            raise ValueError("empty graph")
        if self.degree.min() < 1:
            raise ValueError("graph contains an isolated vertex")

    @property
    def num_edges(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted dense ids adjacent to vertex ``v``."""
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edge_array(self) -> np.ndarray:
        """All edges once, as an (m, 2) array of dense ids with i < j, sorted."""
        rows = np.repeat(np.arange(self.n), np.diff(self.indptr))
        mask = rows < self.indices
        return np.column_stack([rows[mask], self.indices[mask]])


def _graph_from_unique_edges(edges: np.ndarray, labels: np.ndarray) -> Graph:
    """Assemble a Graph from deduplicated undirected edges over dense ids."""
    n = len(labels)
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    indptr = np.cumsum(indptr)
    degree = np.diff(indptr)
    id_map = {int(lab): i for i, lab in enumerate(labels)}
    return Graph(
        n=n,
        indptr=indptr,
        indices=cols.astype(np.int64),
        degree=degree.astype(np.int64),
        labels=labels.astype(np.int64),
        id_map=id_map,
    )


def from_edges(pairs: np.ndarray) -> Graph:
    """Build a Graph from raw (label, label) pairs, applying the cleaning rules.

    Self-loops are discarded, duplicates (in either orientation) collapsed, and
    vertices left without any edge are dropped with a warning. Dense ids are
    assigned in ascending original-label order. Raises ValueError if nothing
    survives cleaning.
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    seen_labels = np.unique(pairs) if pairs.size else np.empty(0, dtype=np.int64)
    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    if pairs.size == 0:
        raise ValueError("empty graph after cleaning (no non-loop edges)")
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    pairs = np.unique(np.column_stack([lo, hi]), axis=0)
    labels = np.unique(pairs)
    dropped = np.setdiff1d(seen_labels, labels)
    if dropped.size:
        log.warning("dropping %d isolated vertex(es): %s", dropped.size,
                    dropped[:10].tolist() + (["..."] if dropped.size > 10 else []))
    dense = np.searchsorted(labels, pairs)
    return _graph_from_unique_edges(dense, labels)


def load_edge_list(source) -> Graph:
    """Parse an edge list: one ``u v`` pair per line, ``#`` comments ignored.

    ``source`` may be a path, a text/binary file object, or bytes. Labels are
    arbitrary non-negative integers. Directed or duplicated input is
    symmetrized and deduplicated; self-loops are dropped; isolated vertices
    are removed with a warning.
    """
    if isinstance(source, (str, Path)):
        with open(source, "rb") as fh:
            return load_edge_list(fh)
    if isinstance(source, bytes):
        return load_edge_list(io.BytesIO(source))

    pairs = []
    for line_no, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListParseError(line_no, line, "expected two vertex labels")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(line_no, line, "non-integer vertex label") from None
        if u < 0 or v < 0:
            raise EdgeListParseError(line_no, line, "negative vertex label")
        pairs.append((u, v))
    if not pairs:
        raise ValueError("empty graph after cleaning (no edges in input)")
    return from_edges(np.array(pairs, dtype=np.int64))


def save_edge_list(g: Graph, dest) -> None:
    """Write each edge once (original labels, sorted) in the loadable format."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as fh:
            save_edge_list(g, fh)
            return
    for i, j in g.edge_array():
        dest.write(f"{g.labels[i]} {g.labels[j]}\n")


def adjacency_matrix(g: Graph) -> sp.csr_matrix:
    """Symmetric 0/1 adjacency as CSR float64."""
    data = np.ones(g.indices.size, dtype=np.float64)
    return sp.csr_matrix((data, g.indices.copy(), g.indptr.copy()), shape=(g.n, g.n))


def common_neighbor_matrix(g: Graph) -> sp.csr_matrix:
    """Pairwise common-neighbor counts with a zero diagonal."""
    a = adjacency_matrix(g)
    c = (a @ a).tocsr()
    c.setdiag(0.0)
    c.eliminate_zeros()
    c.sort_indices()
    log.info("common-neighbor matrix: n=%d nnz=%d density=%.3g",
             g.n, c.nnz, c.nnz / float(g.n) ** 2)
    return c


def proximity_matrix(g: Graph) -> sp.csr_matrix:
    """First- plus second-order proximity: common-neighbor counts plus adjacency."""
    cp = (common_neighbor_matrix(g) + adjacency_matrix(g)).tocsr()
    cp.sort_indices()
    return cp


def penalized_weight_matrix(g: Graph, beta: float) -> sp.csr_matrix:
    """Degree-penalized proximity ``W_ij = C'_ij / (deg_i * deg_j)^beta``."""
    beta = float(beta)
    if not np.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta}")
    scale = sp.diags(g.degree.astype(np.float64) ** -beta)
    w = (scale @ proximity_matrix(g) @ scale).tocsr()
    w.sort_indices()
    return w


def proximity_row(g: Graph, v: int) -> tuple[np.ndarray, np.ndarray]:
    """Row ``v`` of the proximity matrix without materializing the whole thing.

    Returns (support, values): sorted dense ids with nonzero proximity to ``v``
    and their counts. Used by the walk sampler, whose two-hop rows around hubs
    would make the full matrix memory-heavy on large graphs.
    """
    nbrs = g.neighbors(v)
    two_hop = np.concatenate([g.neighbors(int(u)) for u in nbrs])
    counts = np.bincount(two_hop, minlength=g.n).astype(np.float64)
    counts[nbrs] += 1.0
    counts[v] = 0.0
    support = np.flatnonzero(counts)
    return support, counts[support]
