"""Vertex embedding container and its text serialization.

File format: first line ``n k``, then one line per vertex,
``original_label v1 v2 ... vk`` with floats at 17 significant digits so a
round trip through text is bit-exact.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class Embedding:
    """n x k real matrix; row i is the representation of vertex i."""

    labels: np.ndarray
    vectors: np.ndarray
    eigenvalues: np.ndarray | None = None  # spectral methods attach theirs

    def __post_init__(self):
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or len(self.labels) != self.vectors.shape[0]:
            raise ValueError("labels and vectors disagree on vertex count")
        if not np.isfinite(self.vectors).all():
            raise ValueError("embedding contains non-finite entries")

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def k(self) -> int:
        return self.vectors.shape[1]

    def row_by_label(self, label: int) -> np.ndarray:
        idx = int(np.searchsorted(self.labels, label))
        if idx >= self.n or self.labels[idx] != label:
            raise KeyError(f"no vertex with label {label}")
        return self.vectors[idx]


def write_embedding(emb: Embedding, dest) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as fh:
            write_embedding(emb, fh)
            return
    dest.write(f"{emb.n} {emb.k}\n")
    for label, row in zip(emb.labels, emb.vectors):
        dest.write(str(int(label)))
        for v in row:
            dest.write(f" {v:.17g}")
        dest.write("\n")


def read_embedding(source) -> Embedding:
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8") as fh:
            return read_embedding(fh)
    if isinstance(source, bytes):
        return read_embedding(io.StringIO(source.decode("utf-8")))

    header = source.readline().split()
    if len(header) != 2:
        raise ValueError("embedding file: malformed header, expected 'n k'")
    n, k = int(header[0]), int(header[1])
    labels = np.empty(n, dtype=np.int64)
    vectors = np.empty((n, k), dtype=np.float64)
    for i in range(n):
        parts = source.readline().split()
        if len(parts) != k + 1:
            raise ValueError(f"embedding file: row {i} has {len(parts) - 1} values, expected {k}")
        labels[i] = int(parts[0])
        vectors[i] = [float(x) for x in parts[1:]]
    return Embedding(labels=labels, vectors=vectors)
