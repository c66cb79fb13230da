"""Skip-gram training over walk corpora with hierarchical softmax.

The output distribution over vertices is factorized along a Huffman tree
built from corpus frequencies: each vertex is a leaf, and its probability is
the product of sigmoid branch decisions along the root-to-leaf path, so one
prediction costs O(log n) instead of O(n). Branch bit b at inner node p with
vector theta contributes sigma((1 - 2b) * u . theta); the per-node choices sum
to one, hence so do the leaf probabilities.

The hot loop is JIT-compiled. A sequential deterministic kernel is the
default; the relaxed parallel kernel lets workers race on the shared vectors
(the usual lock-free recipe) and is not seed-reproducible.
"""
from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit, prange

from .embedding import Embedding

log = logging.getLogger(__name__)

_SIGMOID_CLIP = 35.0


@dataclass(frozen=True)
class SkipGramConfig:
    k: int
    window: int = 5
    epochs: int = 1
    lr_start: float = 0.025
    lr_end: float = 0.0001
    seed: int = 0
    deterministic: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("embedding dimension must be >= 1")
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not (self.lr_start >= self.lr_end > 0.0):
            raise ValueError("need lr_start >= lr_end > 0")


@dataclass
class HuffmanTree:
    """Root-first paths: points[v, :len] are inner-node ids, codes[v, :len] bits."""

    codes: np.ndarray      # int8 (n, max_len)
    points: np.ndarray     # int32 (n, max_len)
    code_lens: np.ndarray  # int32 (n,)
    n_inner: int


def build_huffman_tree(frequency) -> HuffmanTree:
    """Binary frequency tree over all vertices; ties break on smaller node id.

    Vertices absent from the corpus (frequency 0) still get leaves, just the
    deepest ones. Inner nodes are numbered n..2n-3 in creation order.
    """
    freq = np.asarray(frequency, dtype=np.int64)
    n = freq.size
    if n < 2:
        raise ValueError("need at least 2 vertices to build a tree")

    heap = [(int(f), v) for v, f in enumerate(freq)]
    heapq.heapify(heap)
    parent = np.empty(2 * n - 2, dtype=np.int64)   # root has none
    bit = np.empty(2 * n - 2, dtype=np.int8)
    next_id = n
    while len(heap) > 1:
        fa, a = heapq.heappop(heap)
        fb, b = heapq.heappop(heap)
        parent[a], bit[a] = next_id, 0
        parent[b], bit[b] = next_id, 1
        heapq.heappush(heap, (fa + fb, next_id))
        next_id += 1
    root = next_id - 1

    paths = []
    max_len = 0
    for v in range(n):
        path = []
        node = v
        while node != root:
            path.append((parent[node] - n, bit[node]))
            node = parent[node]
        path.reverse()
        paths.append(path)
        max_len = max(max_len, len(path))

    codes = np.zeros((n, max_len), dtype=np.int8)
    points = np.zeros((n, max_len), dtype=np.int32)
    code_lens = np.empty(n, dtype=np.int32)
    for v, path in enumerate(paths):
        code_lens[v] = len(path)
        for t, (p, b) in enumerate(path):
            points[v, t] = p
            codes[v, t] = b
    return HuffmanTree(codes=codes, points=points, code_lens=code_lens, n_inner=n - 1)


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -_SIGMOID_CLIP, _SIGMOID_CLIP)))


def leaf_probabilities(tree: HuffmanTree, context_vectors: np.ndarray,
                       vec: np.ndarray) -> np.ndarray:
    """Pr(leaf | vec) for every leaf; the values sum to 1 by construction."""
    n = tree.code_lens.size
    probs = np.empty(n)
    for v in range(n):
        ln = tree.code_lens[v]
        f = context_vectors[tree.points[v, :ln]] @ vec
        s = 1.0 - 2.0 * tree.codes[v, :ln]
        probs[v] = float(np.prod(_sigmoid(s * f)))
    return probs


def hs_pair_loss(center_vec: np.ndarray, node_vecs: np.ndarray,
                 code_bits: np.ndarray) -> float:
    """-log probability of one leaf's path given the input vector."""
    f = node_vecs @ center_vec
    s = 1.0 - 2.0 * np.asarray(code_bits, dtype=np.float64)
    return float(np.logaddexp(0.0, -s * f).sum())


def hs_pair_gradients(center_vec: np.ndarray, node_vecs: np.ndarray,
                      code_bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Analytic gradients of hs_pair_loss w.r.t. the input and the path vectors."""
    f = node_vecs @ center_vec
    dldf = _sigmoid(f) - (1.0 - np.asarray(code_bits, dtype=np.float64))
    return dldf @ node_vecs, np.outer(dldf, center_vec)


@njit(cache=True)
def _pair_update(syn0, syn1, center, target, alpha, codes, points, code_lens):
    k = syn0.shape[1]
    loss = 0.0
    ln = code_lens[target]
    neu1e = np.zeros(k)
    for t in range(ln):
        node = points[target, t]
        f = 0.0
        for d in range(k):
            f += syn0[center, d] * syn1[node, d]
        if f > _SIGMOID_CLIP:
            sig = 1.0
        elif f < -_SIGMOID_CLIP:
            sig = 0.0
        else:
            sig = 1.0 / (1.0 + math.exp(-f))
        b = codes[target, t]
        sf = f if b == 0 else -f
        if sf < -_SIGMOID_CLIP:
            loss += -sf
        else:
            loss += math.log1p(math.exp(-sf))
        g = (1.0 - b - sig) * alpha
        for d in range(k):
            neu1e[d] += g * syn1[node, d]
            syn1[node, d] += g * syn0[center, d]
    for d in range(k):
        syn0[center, d] += neu1e[d]
    return loss


@njit(cache=True)
def _walk_pass(syn0, syn1, tokens, lo, hi, window, lr_start, lr_end,
               done_before, schedule_total, codes, points, code_lens):
    loss = 0.0
    pairs = 0
    for i in range(lo, hi):
        center = tokens[i]
        alpha = lr_start * (1.0 - (done_before + (i - lo)) / schedule_total)
        if alpha < lr_end:
            alpha = lr_end
        jlo = i - window
        if jlo < lo:
            jlo = lo
        jhi = i + window
        if jhi > hi - 1:
            jhi = hi - 1
        for j in range(jlo, jhi + 1):
            if j == i:
                continue
            loss += _pair_update(syn0, syn1, center, tokens[j], alpha,
                                 codes, points, code_lens)
            pairs += 1
    return loss, pairs


@njit(cache=True)
def _epoch_sequential(syn0, syn1, tokens, offsets, window, lr_start, lr_end,
                      done_before, schedule_total, codes, points, code_lens):
    loss = 0.0
    pairs = 0
    for w in range(offsets.shape[0] - 1):
        l, p = _walk_pass(syn0, syn1, tokens, offsets[w], offsets[w + 1], window,
                          lr_start, lr_end, done_before + offsets[w],
                          schedule_total, codes, points, code_lens)
        loss += l
        pairs += p
    return loss, pairs


@njit(cache=True, parallel=True)
def _epoch_parallel(syn0, syn1, tokens, offsets, window, lr_start, lr_end,
                    done_before, schedule_total, codes, points, code_lens):
    # lock-free: concurrent walks race on syn0/syn1, which is tolerated
    loss = 0.0
    pairs = 0
    for w in prange(offsets.shape[0] - 1):
        l, p = _walk_pass(syn0, syn1, tokens, offsets[w], offsets[w + 1], window,
                          lr_start, lr_end, done_before + offsets[w],
                          schedule_total, codes, points, code_lens)
        loss += l
        pairs += p
    return loss, pairs


@dataclass
class SkipGramResult:
    embedding: Embedding
    epoch_mean_loss: list[float]
    untrained: np.ndarray
    tree: HuffmanTree = field(repr=False)
    context_vectors: np.ndarray = field(repr=False)


def initial_vectors(n: int, k: int, seed: int) -> np.ndarray:
    """The usual uniform [-0.5/k, 0.5/k] rows."""
    rng = np.random.default_rng(np.random.SeedSequence((seed, 0x1417)))
    return (rng.random((n, k)) - 0.5) / k


def train_skipgram(corpus, cfg: SkipGramConfig, labels=None) -> SkipGramResult:
    """Fit vertex vectors by predicting each token's window around the corpus.

    Vertices that never occur keep their initialization; they are reported in
    the result and logged. The mean loss per epoch is the mean negative log
    path probability over trained pairs.
    """
    freq = np.asarray(corpus.vertex_frequency, dtype=np.int64)
    n = freq.size
    if not corpus.walks:
        raise ValueError("empty corpus")
    tokens = np.concatenate([np.asarray(w, dtype=np.int32) for w in corpus.walks])
    if tokens.min() < 0 or tokens.max() >= n:
        raise ValueError("corpus contains out-of-range vertex ids")
    lengths = np.array([len(w) for w in corpus.walks], dtype=np.int64)
    offsets = np.concatenate([[0], np.cumsum(lengths)])

    tree = build_huffman_tree(freq)
    syn0 = initial_vectors(n, cfg.k, cfg.seed)
    syn1 = np.zeros((tree.n_inner, cfg.k))

    schedule_total = float(tokens.size * cfg.epochs)
    epoch_fn = _epoch_sequential if cfg.deterministic else _epoch_parallel
    epoch_mean_loss = []
    for epoch in range(cfg.epochs):
        loss, pairs = epoch_fn(
            syn0, syn1, tokens, offsets, cfg.window, cfg.lr_start, cfg.lr_end,
            float(epoch * tokens.size), schedule_total,
            tree.codes, tree.points, tree.code_lens)
        epoch_mean_loss.append(loss / max(pairs, 1))
        log.info("skip-gram epoch %d/%d: %d pairs, mean loss %.4f",
                 epoch + 1, cfg.epochs, pairs, epoch_mean_loss[-1])

    untrained = np.flatnonzero(freq == 0)
    if untrained.size:
        log.warning("%d vertex(es) absent from corpus keep their initialization",
                    untrained.size)
    if labels is None:
        labels = np.arange(n, dtype=np.int64)
    emb = Embedding(labels=np.asarray(labels, dtype=np.int64), vectors=syn0)
    return SkipGramResult(embedding=emb, epoch_mean_loss=epoch_mean_loss,
                          untrained=untrained, tree=tree, context_vectors=syn1)
