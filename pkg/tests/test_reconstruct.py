import math

import numpy as np
import pytest

from dpne.embedding import Embedding
from dpne.generator import PaConfig, generate_pa
from dpne.graph import load_edge_list
from dpne.reconstruct import (degree_correlations, distance_threshold,
                              edge_probability, epsilon_grid, reconstruct,
                              reconstruct_edges, sweep_epsilon)

from conftest import random_graph


def emb_of(rows):
    rows = np.asarray(rows, dtype=np.float64)
    return Embedding(labels=np.arange(len(rows)), vectors=rows)


def brute_force_degrees(vectors, eps):
    """Oracle: evaluate the pair probability definition on every pair."""
    n = len(vectors)
    deg = np.zeros(n, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            p = 1.0 / (1.0 + math.exp(np.linalg.norm(vectors[i] - vectors[j])))
            if p >= eps:
                deg[i] += 1
    return deg


def brute_force_pearson(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    xc, yc = x - x.mean(), y - y.mean()
    return float((xc * yc).sum() / math.sqrt((xc ** 2).sum() * (yc ** 2).sum()))


def average_ranks(x):
    """Midrank vector computed from first principles."""
    x = np.asarray(x, float)
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x))
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and x[order[j + 1]] == x[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def brute_force_kendall_tau_b(x, y):
    """All-pairs concordance count with the tie correction."""
    n = len(x)
    nc = nd = tx = ty = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx, dy = x[i] - x[j], y[i] - y[j]
            if dx == 0 and dy == 0:
                tx += 1
                ty += 1
            elif dx == 0:
                tx += 1
            elif dy == 0:
                ty += 1
            elif dx * dy > 0:
                nc += 1
            else:
                nd += 1
    n0 = n * (n - 1) / 2
    return (nc - nd) / math.sqrt((n0 - tx) * (n0 - ty))


def test_edge_probability_examples():
    assert edge_probability([1.0, 2.0], [1.0, 2.0]) == 0.5
    assert edge_probability([0.0], [math.log(3.0)]) == pytest.approx(0.25)
    last = 0.5
    for d in (0.5, 1.0, 2.0, 5.0, 20.0):
        p = edge_probability([0.0], [d])
        assert p < last
        last = p
    with pytest.raises(ValueError):
        edge_probability([1.0, 2.0], [1.0])


def test_distance_threshold():
    assert distance_threshold(0.25) == pytest.approx(math.log(3.0))
    assert distance_threshold(0.5) == 0.0
    assert distance_threshold(0.75) < 0.0
    with pytest.raises(ValueError):
        distance_threshold(0.0)


def test_reconstruct_examples():
    assert reconstruct(emb_of([[1.0, 1.0]] * 3), 0.5).tolist() == [2, 2, 2]
    assert reconstruct(emb_of([[0.0], [1.0], [10.0]]), 1.0).tolist() == [0, 0, 0]
    assert reconstruct(emb_of([[0.0], [1.0], [10.0]]), 0.25).tolist() == [1, 1, 0]


def test_reconstruct_monotone_in_epsilon(rng):
    emb = emb_of(rng.standard_normal((60, 4)))
    prev = None
    for eps in (0.05, 0.1, 0.2, 0.35, 0.5, 0.7):
        deg = reconstruct(emb, eps)
        if prev is not None:
            assert np.all(deg <= prev)
        prev = deg


def test_reconstruct_matches_brute_force(rng):
    # the equivalence contract covers eps < 0.5 (eps = 0.5 puts the threshold
    # exactly at distance zero, where the two evaluation orders may disagree
    # on coincident-point rounding)
    for n, k in [(40, 3), (200, 8), (500, 2)]:
        emb = emb_of(rng.standard_normal((n, k)) * rng.uniform(0.3, 2.0))
        for eps in (0.05, 0.2, 0.35, 0.49):
            assert np.array_equal(reconstruct(emb, eps),
                                  brute_force_degrees(emb.vectors, eps))


def test_identical_rows_at_half(rng):
    rows = np.tile(rng.standard_normal(7), (3, 1))
    assert reconstruct(emb_of(rows), 0.5).tolist() == [2, 2, 2]


def test_self_pairs_never_counted(rng):
    emb = emb_of(np.zeros((5, 3)))
    assert reconstruct(emb, 0.5).tolist() == [4] * 5  # n-1, not n


def test_correlations_examples():
    c = degree_correlations([1, 2, 3, 4], [1, 2, 3, 4])
    assert c.pearson == pytest.approx(1.0, abs=1e-12)
    assert c.spearman == pytest.approx(1.0, abs=1e-12)
    assert c.kendall == pytest.approx(1.0, abs=1e-12)
    c = degree_correlations([1, 2, 3, 4], [8, 6, 4, 2])
    assert c.spearman == pytest.approx(-1.0)
    assert c.kendall == pytest.approx(-1.0)
    c = degree_correlations([1, 2, 3, 4, 5], [1, 2, 3, 5, 4])
    assert c.kendall == pytest.approx(0.8)  # 9 concordant, 1 discordant of 10


def test_correlations_flag_degenerate():
    c = degree_correlations([1, 1, 1], [1, 2, 3])
    assert not c.defined
    assert math.isnan(c.pearson)
    with pytest.raises(ValueError):
        degree_correlations([1.0], [2.0])


def test_correlations_match_definitions(rng):
    for trial in range(25):
        n = int(rng.integers(4, 101))
        x = rng.integers(0, 12, size=n)  # plenty of ties
        y = rng.integers(0, 12, size=n)
        if np.ptp(x) == 0 or np.ptp(y) == 0:
            continue
        c = degree_correlations(x, y)
        assert c.pearson == pytest.approx(brute_force_pearson(x, y), abs=1e-9)
        assert c.spearman == pytest.approx(
            brute_force_pearson(average_ranks(x), average_ranks(y)), abs=1e-9)
        assert c.kendall == pytest.approx(brute_force_kendall_tau_b(x, y), abs=1e-9)


def test_epsilon_grid_defaults():
    grid = epsilon_grid()
    assert len(grid) == 100
    assert grid[0] == 0.01 and grid[-1] == 1.0


def planted_geometric_instance():
    """Embedding whose thresholding at some grid eps recovers degrees exactly.

    Vertices sit on a line at spacing 1.2; consecutive pairs (distance 1.2)
    are edges, all other pairs are farther than 2.4. Threshold between 1.2 and
    2.4 recovers the path graph exactly.
    """
    n = 30
    xs = np.arange(n, dtype=np.float64) * 1.2
    edges = "\n".join(f"{i} {i + 1}" for i in range(n - 1)).encode()
    g = load_edge_list(edges)
    return emb_of(xs[:, None]), g


def test_sweep_planted_geometric_perfect_recovery():
    emb, g = planted_geometric_instance()
    best, table = sweep_epsilon(emb, g)
    assert len(table) == 100
    assert best.pearson == pytest.approx(1.0)
    degrees = best.reconstructed_degrees
    assert np.array_equal(degrees, g.degree)


def test_sweep_tie_break_toward_smaller_epsilon():
    emb, g = planted_geometric_instance()
    best, table = sweep_epsilon(emb, g)
    perfect = [r.epsilon for r in table if r.pearson >= 1.0 - 1e-12]
    assert best.epsilon == min(perfect)
    assert len(perfect) > 1  # the tie actually exercised something


def test_sweep_degenerate_embedding_still_tabulates():
    rows = np.zeros((12, 3))
    g = generate_pa(PaConfig(n=12, m=2, seed=0))
    best, table = sweep_epsilon(emb_of(rows), g)
    assert len(table) == 100
    assert best.degenerate
    assert all(r.degenerate or not math.isnan(r.pearson) for r in table)


def test_reconstruct_edges_match_degrees(rng):
    emb = emb_of(rng.standard_normal((50, 4)))
    for eps in (0.2, 0.4, 0.8):
        pairs = reconstruct_edges(emb, eps)
        deg = np.bincount(pairs.ravel(), minlength=50) if pairs.size else np.zeros(50, int)
        assert np.array_equal(deg, reconstruct(emb, eps))
        assert np.all(pairs[:, 0] < pairs[:, 1])
    with pytest.raises(ValueError, match="capped"):
        reconstruct_edges(emb, 0.3, max_vertices=10)


def test_sweep_edge_count_consistent(rng):
    g = random_graph(rng, 40, 0.15)
    emb = Embedding(labels=g.labels, vectors=rng.standard_normal((g.n, 5)))
    _, table = sweep_epsilon(emb, g)
    for r in table:
        assert r.edge_count == r.reconstructed_degrees.sum() // 2
