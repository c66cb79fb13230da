"""Spectral embedding from the degree-penalized weight matrix.

Minimizes sum_ij W_ij ||u_i - u_j||^2 subject to U^T D U = I, where D is the
diagonal of W's row sums. The minimizers are the bottom eigenvectors of the
symmetric normalized Laplacian I - D^{-1/2} W D^{-1/2}; the all-constant
eigenvalue-0 direction carries no information and is dropped. Eigenvectors t
map to rows via y = D^{-1/2} t, which satisfies the constraint exactly.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigh
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .embedding import Embedding
from .graph import Graph, adjacency_matrix, penalized_weight_matrix

log = logging.getLogger(__name__)

MODES = ("dp-spectral", "le-baseline")

# below this size a dense solve is cheaper and immune to Lanczos edge cases
_DENSE_CUTOFF = 256


class SpectralConvergenceError(RuntimeError):
    """Eigensolver failed to reach the requested residual; carries the best achieved."""

    def __init__(self, achieved: float, requested: float):
        self.achieved = achieved
        self.requested = requested
        super().__init__(
            f"eigensolver residual {achieved:.3e} did not reach tolerance {requested:.3e}")


@dataclass(frozen=True)
class SpectralConfig:
    k: int
    beta: float = 1.0
    tol: float = 1e-8
    max_iter: int | None = None  # matvec cap; defaults to 10 n
    mode: str = "dp-spectral"
    seed: int = 0  # start-vector seed for the iterative solver

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"embedding dimension must be >= 1, got {self.k}")
        if not self.tol > 0.0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


def normalized_laplacian(w: sp.spmatrix, g: Graph | None = None) -> sp.csr_matrix:
    """I - D^{-1/2} W D^{-1/2} with D the diagonal of W's row sums.

    Raises on a zero row sum, naming the offending vertex (it has no proximity
    mass at all). ``g`` is only consulted to report the original label.
    """
    w = w.tocsr()
    n = w.shape[0]
    rowsum = np.asarray(w.sum(axis=1)).ravel()
    bad = np.flatnonzero(rowsum == 0.0)
    if bad.size:
        v = int(bad[0])
        label = f" (label {g.labels[v]})" if g is not None else ""
        raise ValueError(f"vertex {v}{label} has zero weight-matrix row sum")
    inv_sqrt = sp.diags(rowsum ** -0.5)
    lap = (sp.identity(n, format="csr") - inv_sqrt @ w @ inv_sqrt).tocsr()
    lap.sort_indices()
    return lap


def _smallest_eigenpairs(w: sp.csr_matrix, count: int, tol: float,
                         max_iter: int | None, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Bottom ``count`` eigenpairs of the normalized Laplacian of ``w``.

    Works on S = D^{-1/2} W D^{-1/2} and takes its largest eigenpairs (same
    eigenvectors, eigenvalues 1 - mu) instead of shift-inverting the
    Laplacian, which is the numerically safer direction for this operator.
    """
    n = w.shape[0]
    rowsum = np.asarray(w.sum(axis=1)).ravel()
    inv_sqrt = sp.diags(rowsum ** -0.5)
    s_mat = (inv_sqrt @ w @ inv_sqrt).tocsr()

    if n <= max(_DENSE_CUTOFF, 3 * count):
        mu, t = eigh(s_mat.toarray())
        mu, t = mu[::-1][:count], t[:, ::-1][:, :count]
    else:
        v0 = np.random.default_rng(np.random.SeedSequence((seed, 0x5eed))).standard_normal(n)
        maxiter = max_iter if max_iter is not None else 10 * n
        try:
            mu, t = eigsh(s_mat, k=count, which="LA", v0=v0, tol=tol / 10.0, maxiter=maxiter)
        except ArpackNoConvergence as exc:
            achieved = np.inf
            if exc.eigenvectors is not None and exc.eigenvectors.size:
                r = s_mat @ exc.eigenvectors - exc.eigenvectors * exc.eigenvalues
                achieved = float(np.linalg.norm(r, axis=0).max())
            raise SpectralConvergenceError(achieved, tol) from exc
        order = np.argsort(mu)[::-1]
        mu, t = mu[order], t[:, order]

    resid = s_mat @ t - t * mu
    worst = float((np.linalg.norm(resid, axis=0) / np.linalg.norm(t, axis=0)).max())
    if worst > tol:
        raise SpectralConvergenceError(worst, tol)

    lam = 1.0 - mu  # Laplacian eigenvalues, ascending
    return lam, t


def _canonical_signs(t: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(t), axis=0)
    signs = np.sign(t[idx, np.arange(t.shape[1])])
    signs[signs == 0.0] = 1.0
    return t * signs


def embed_from_weights(g: Graph, w: sp.csr_matrix, cfg: SpectralConfig) -> Embedding:
    """Shared solver path: embed using an explicit symmetric weight matrix."""
    if g.n < cfg.k + 2:
        raise ValueError(f"need at least k+2={cfg.k + 2} vertices, got {g.n}")
    n_comp, _ = connected_components(w, directed=False)
    if n_comp > 1:
        raise ValueError(
            f"weight matrix splits into {n_comp} connected components; "
            "embed each component separately")
    rowsum = np.asarray(w.sum(axis=1)).ravel()
    bad = np.flatnonzero(rowsum == 0.0)
    if bad.size:
        raise ValueError(f"vertex {int(bad[0])} (label {g.labels[int(bad[0])]}) "
                         "has zero weight-matrix row sum")

    lam, t = _smallest_eigenpairs(w, cfg.k + 1, cfg.tol, cfg.max_iter, cfg.seed)
    # drop the trivial constant-direction eigenvector (smallest eigenvalue ~ 0)
    lam, t = lam[1:], t[:, 1:]
    t = _canonical_signs(t)
    u = t / np.sqrt(rowsum)[:, None]  # rows now satisfy U^T D U = I
    log.info("spectral embedding: n=%d k=%d mode=%s eigenvalue range [%.3g, %.3g]",
             g.n, cfg.k, cfg.mode, lam[0], lam[-1])
    return Embedding(labels=g.labels, vectors=u, eigenvalues=lam)


def embed_spectral(g: Graph, cfg: SpectralConfig) -> Embedding:
    """Embed a graph; weights are degree-penalized proximity, or plain
    adjacency in le-baseline mode (beta ignored there)."""
    if cfg.mode == "le-baseline":
        w = adjacency_matrix(g)
    else:
        w = penalized_weight_matrix(g, cfg.beta)
    return embed_from_weights(g, w, cfg)
