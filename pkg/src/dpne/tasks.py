"""Downstream evaluation: link prediction and vertex classification.

Both tasks train L2-regularized logistic classifiers by seeded SGD on
embedding-derived features: u_i - u_j for a candidate edge, u_i for a vertex.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .embedding import Embedding
from .graph import Graph

log = logging.getLogger(__name__)


@dataclass
class LabeledExample:
    feature: np.ndarray
    label: int


@dataclass
class TaskReport:
    precision: float | None = None
    recall: float | None = None
    f1: float | None = None
    per_class_accuracy: dict[int, float] | None = None
    accuracy: float | None = None
    confusion: tuple[int, int, int, int] | None = None  # tp, fp, fn, tn
    skipped_classes: list[int] = field(default_factory=list)


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-np.clip(z, -35.0, 35.0)))


def logistic_loss_grad(w: np.ndarray, feats: np.ndarray, y: np.ndarray,
                       l2: float) -> tuple[float, np.ndarray]:
    """Mean logistic loss and gradient; bias (last weight) is not regularized."""
    z = feats @ w[:-1] + w[-1]
    p = _sigmoid(z)
    eps = 1e-12
    loss = -np.mean(y * np.log(p + eps) + (1.0 - y) * np.log(1.0 - p + eps))
    loss += 0.5 * l2 * float(w[:-1] @ w[:-1])
    err = (p - y) / y.size
    grad = np.concatenate([feats.T @ err + l2 * w[:-1], [err.sum()]])
    return float(loss), grad


@dataclass
class LogisticModel:
    classes: np.ndarray
    weights: np.ndarray  # (n_classes, d+1), one-vs-rest rows; bias last
    feature_mean: np.ndarray
    feature_scale: np.ndarray
    epoch_loss: list[list[float]] = field(default_factory=list)

    def decision(self, feats: np.ndarray) -> np.ndarray:
        z = (feats - self.feature_mean) / self.feature_scale
        return z @ self.weights[:, :-1].T + self.weights[:, -1]

    def predict(self, feats: np.ndarray) -> np.ndarray:
        if self.classes.size == 2:
            return np.where(self.decision(feats)[:, 1] >= 0.0,
                            self.classes[1], self.classes[0])
        return self.classes[np.argmax(self.decision(feats), axis=1)]

    def predict_proba(self, feats: np.ndarray) -> np.ndarray:
        """Positive-class probability; binary models only."""
        if self.classes.size != 2:
            raise ValueError("predict_proba is for binary models")
        return _sigmoid(self.decision(feats)[:, 1])


def _sgd_binary(feats, y, l2, epochs, lr, rng) -> tuple[np.ndarray, list[float]]:
    n, d = feats.shape
    w = np.zeros(d + 1)
    losses = []
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            step = lr / math.sqrt(t)
            z = feats[i] @ w[:-1] + w[-1]
            err = _sigmoid(z) - y[i]
            w[:-1] -= step * (err * feats[i] + l2 * w[:-1])
            w[-1] -= step * err
        losses.append(logistic_loss_grad(w, feats, y, l2)[0])
    return w, losses


def logistic_train(examples, l2: float = 1e-4, epochs: int = 50,
                   lr: float = 0.1, seed: int = 0) -> LogisticModel:
    """Seeded SGD with 1/sqrt(t) decay; one-vs-rest when more than two classes.

    Features are standardized column-wise on the training set (embedding rows
    can sit many orders of magnitude below unit scale, which would strangle
    plain SGD); the fitted scaler travels with the model.
    """
    feats = np.asarray([np.asarray(e.feature, dtype=np.float64) for e in examples])
    labels = np.asarray([e.label for e in examples], dtype=np.int64)
    if not np.isfinite(feats).all():
        raise ValueError("non-finite feature")
    if labels.min(initial=0) < 0:
        raise ValueError("class ids must be non-negative")
    classes = np.unique(labels)
    if classes.size < 2:
        raise ValueError("need at least 2 classes to train a classifier")

    mean = feats.mean(axis=0)
    scale = feats.std(axis=0)
    scale[scale < 1e-12] = 1.0  # constant columns stay constant
    feats = (feats - mean) / scale

    rng = np.random.default_rng(seed)
    weights = np.empty((classes.size, feats.shape[1] + 1))
    epoch_loss = []
    for ci, c in enumerate(classes):
        y = (labels == c).astype(np.float64)
        weights[ci], losses = _sgd_binary(feats, y, l2, epochs, lr, rng)
        epoch_loss.append(losses)
    return LogisticModel(classes=classes, weights=weights, feature_mean=mean,
                         feature_scale=scale, epoch_loss=epoch_loss)


def _stratified_split(labels: np.ndarray, train_frac: float,
                      rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    train_idx, test_idx = [], []
    for c in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == c))
        cut = int(round(train_frac * idx.size))
        cut = min(max(cut, 1), idx.size - 1)
        train_idx.append(idx[:cut])
        test_idx.append(idx[cut:])
    return np.concatenate(train_idx), np.concatenate(test_idx)


def sample_negative_pairs(g: Graph, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform distinct non-edges (i < j dense ids), rejection-sampled."""
    n = g.n
    possible = n * (n - 1) // 2 - g.num_edges
    if count > possible:
        raise ValueError(f"graph too small: asked for {count} non-edges, only {possible} exist")
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < count:
        draw = count - len(chosen)
        a = rng.integers(0, n, size=2 * draw).reshape(-1, 2)
        for i, j in a:
            if i == j:
                continue
            i, j = (int(i), int(j)) if i < j else (int(j), int(i))
            if (i, j) in chosen:
                continue
            pos = np.searchsorted(g.neighbors(i), j)
            if pos < g.degree[i] and g.neighbors(i)[pos] == j:
                continue  # actual edge
            chosen.add((i, j))
            if len(chosen) == count:
                break
    out = np.array(sorted(chosen), dtype=np.int64)
    return out


def _binary_report(pred: np.ndarray, truth: np.ndarray) -> TaskReport:
    tp = int(np.sum((pred == 1) & (truth == 1)))
    fp = int(np.sum((pred == 1) & (truth == 0)))
    fn = int(np.sum((pred == 0) & (truth == 1)))
    tn = int(np.sum((pred == 0) & (truth == 0)))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2.0 * precision * recall / (precision + recall)) if precision + recall else 0.0
    return TaskReport(precision=precision, recall=recall, f1=f1,
                      accuracy=(tp + tn) / pred.size,
                      confusion=(tp, fp, fn, tn))


def link_prediction_eval(emb: Embedding, g: Graph, sample_fraction: float = 0.01,
                         seed: int = 0, negative_ratio: float = 1.0,
                         train_frac: float = 0.7, l2: float = 1e-4,
                         epochs: int = 50, lr: float = 0.1) -> TaskReport:
    """Classify sampled edges vs non-edges from the pairs' row differences.

    The feature of a pair is the elementwise magnitude of u_i - u_j (the
    signed difference is antisymmetric in pair order, which a linear model
    cannot square with the symmetric edge relation). sample_fraction is the
    fraction of existing edges drawn as positives; negatives are uniform
    verified non-edges at negative_ratio per positive. The split is 70/30
    stratified by class; precision/recall/F1 are reported for the positive
    class on the test side.
    """
    if not 0.0 < sample_fraction <= 1.0:
        raise ValueError("sample_fraction must lie in (0, 1]")
    if emb.n != g.n or not np.array_equal(emb.labels, g.labels):
        raise ValueError("embedding and graph disagree on vertex set")
    rng = np.random.default_rng(seed)

    edges = g.edge_array()
    n_pos = max(2, int(round(sample_fraction * len(edges))))
    if n_pos > len(edges):
        raise ValueError(f"graph too small: asked for {n_pos} edges, has {len(edges)}")
    pos = edges[rng.choice(len(edges), size=n_pos, replace=False)]
    neg = sample_negative_pairs(g, max(2, int(round(negative_ratio * n_pos))), rng)

    pairs = np.concatenate([pos, neg])
    labels = np.concatenate([np.ones(len(pos), dtype=np.int64),
                             np.zeros(len(neg), dtype=np.int64)])
    feats = np.abs(emb.vectors[pairs[:, 0]] - emb.vectors[pairs[:, 1]])

    train_idx, test_idx = _stratified_split(labels, train_frac, rng)
    examples = [LabeledExample(feats[i], int(labels[i])) for i in train_idx]
    model = logistic_train(examples, l2=l2, epochs=epochs, lr=lr,
                           seed=int(rng.integers(2 ** 63)))
    pred = model.predict(feats[test_idx])
    return _binary_report(pred, labels[test_idx])


def vertex_classification_eval(emb: Embedding, labels: dict[int, int], seed: int = 0,
                               train_frac: float = 0.7, l2: float = 1e-4,
                               epochs: int = 50, lr: float = 0.1,
                               min_class_size: int = 5) -> TaskReport:
    """One-vs-rest classification of vertex labels from embedding rows.

    Classes with fewer than min_class_size examples are skipped with a
    warning. Reports the per-class test accuracy (and the overall one).
    """
    label_items = sorted(labels.items())
    idx = emb_label_index(emb)
    missing = [lab for lab, _ in label_items if lab not in idx]
    if missing:
        raise ValueError(f"labels reference vertices missing from the embedding: {missing[:5]}")
    rows = np.array([idx[lab] for lab, _ in label_items], dtype=np.int64)
    y = np.array([c for _, c in label_items], dtype=np.int64)

    keep_classes, skipped = [], []
    for c in np.unique(y):
        (keep_classes if np.sum(y == c) >= min_class_size else skipped).append(int(c))
    if skipped:
        log.warning("skipping classes with fewer than %d examples: %s",
                    min_class_size, skipped)
    if len(keep_classes) < 2:
        raise ValueError("need at least 2 usable classes")
    mask = np.isin(y, keep_classes)
    rows, y = rows[mask], y[mask]
    feats = emb.vectors[rows]

    rng = np.random.default_rng(seed)
    train_idx, test_idx = _stratified_split(y, train_frac, rng)
    examples = [LabeledExample(feats[i], int(y[i])) for i in train_idx]
    model = logistic_train(examples, l2=l2, epochs=epochs, lr=lr,
                           seed=int(rng.integers(2 ** 63)))
    pred = model.predict(feats[test_idx])
    truth = y[test_idx]

    per_class = {}
    for c in keep_classes:
        sel = truth == c
        if sel.any():
            per_class[c] = float(np.mean(pred[sel] == c))
    return TaskReport(per_class_accuracy=per_class,
                      accuracy=float(np.mean(pred == truth)),
                      skipped_classes=skipped)


def emb_label_index(emb: Embedding) -> dict[int, int]:
    return {int(lab): i for i, lab in enumerate(emb.labels)}
