import io

import numpy as np
import pytest
from hypothesis import given, settings

from dpne.graph import load_edge_list, proximity_matrix
from dpne.skipgram import SkipGramConfig
from dpne.walker import (TransitionSampler, WalkConfig, build_alias_table,
                         embed_walker, generate_walks, transition_distribution)

from conftest import edge_lists, graphs_from, random_graph

STAR = b"0 1\n0 2\n0 3"  # center 0, leaves 1..3


def test_star_leaf_distribution_beta_one():
    g = load_edge_list(STAR)
    dist = transition_distribution(g, 1.0, 1)
    assert dist[0] == pytest.approx(1.0 / 7.0)
    assert dist[2] == pytest.approx(3.0 / 7.0)
    assert dist[3] == pytest.approx(3.0 / 7.0)


def test_star_leaf_distribution_beta_zero():
    g = load_edge_list(STAR)
    dist = transition_distribution(g, 0.0, 1)
    assert dist == pytest.approx({0: 1 / 3, 2: 1 / 3, 3: 1 / 3})


def test_single_edge_sole_support():
    g = load_edge_list(b"0 1")
    assert transition_distribution(g, 1.0, 0) == {1: 1.0}


def test_support_is_proximity_row(rng):
    g = random_graph(rng, 30, 0.15)
    cp = proximity_matrix(g)
    for v in range(g.n):
        dist = transition_distribution(g, 0.7, v)
        assert sorted(dist) == sorted(cp.getrow(v).indices.tolist())


@settings(max_examples=30, deadline=None)
@given(edge_lists(max_vertices=12))
def test_distribution_sums_to_one(pairs):
    g = graphs_from(pairs)
    for v in range(g.n):
        total = sum(transition_distribution(g, 1.5, v).values())
        assert abs(total - 1.0) <= 1e-12


def test_hub_suppression_monotone_in_beta():
    g = load_edge_list(STAR)
    last = None
    for beta in (0.25, 0.5, 1.0, 2.0, 3.0):
        p_center = transition_distribution(g, beta, 1)[0]
        p_leaf = transition_distribution(g, beta, 1)[2]
        assert p_center < p_leaf
        if last is not None:
            assert p_center < last
        last = p_center


def test_alias_table_preserves_distribution(rng):
    for size in (1, 2, 7, 40):
        probs = rng.random(size)
        probs /= probs.sum()
        accept, alias = build_alias_table(probs.copy())
        # exact reconstruction: each cell contributes accept/size to itself
        # and (1 - accept)/size to its alias
        recon = np.zeros(size)
        for i in range(size):
            recon[i] += accept[i] / size
            recon[alias[i]] += (1.0 - accept[i]) / size
        assert np.allclose(recon, probs, atol=1e-6)


def test_sampler_matches_exact_distribution(rng):
    g = random_graph(rng, 15, 0.25)
    sampler = TransitionSampler(g, 1.0)
    for v in (0, 7):
        exact = transition_distribution(g, 1.0, v)
        draws = 10_000
        u = rng.random((draws, 2))
        hits = np.bincount([sampler.step(v, a, b) for a, b in u], minlength=g.n)
        for j, p in exact.items():
            assert hits[j] / draws == pytest.approx(p, abs=0.02)
        assert hits[np.setdiff1d(np.arange(g.n), list(exact))].sum() == 0


def test_star_monte_carlo_frequencies():
    g = load_edge_list(STAR)
    cfg = WalkConfig(walks_per_vertex=10_000, walk_length=2, beta=1.0, seed=99)
    corpus = generate_walks(g, cfg)
    from_leaf = [w[1] for w in corpus.walks if w[0] == 1]
    hits = np.bincount(from_leaf, minlength=4)
    assert hits.sum() == 10_000
    assert hits[0] / 10_000 == pytest.approx(1.0 / 7.0, abs=0.02)
    assert hits[2] / 10_000 == pytest.approx(3.0 / 7.0, abs=0.02)


def test_corpus_structure_path_graph():
    g = load_edge_list(b"0 1\n1 2")
    cfg = WalkConfig(walks_per_vertex=1, walk_length=2, beta=1.0, seed=0)
    corpus = generate_walks(g, cfg)
    assert len(corpus.walks) == 3
    cp = proximity_matrix(g)
    for w in corpus.walks:
        assert len(w) == 2
        assert cp[w[0], w[1]] > 0  # consecutive pairs stay in the support
    assert corpus.vertex_frequency.sum() == corpus.total_tokens == 6


def test_walk_counts_and_lengths(rng):
    g = random_graph(rng, 20, 0.2)
    cfg = WalkConfig(walks_per_vertex=3, walk_length=7, beta=0.5, seed=1)
    corpus = generate_walks(g, cfg)
    assert len(corpus.walks) == 3 * g.n
    assert all(len(w) == 7 for w in corpus.walks)
    starts = np.bincount([w[0] for w in corpus.walks], minlength=g.n)
    assert np.all(starts == 3)


def test_corpus_byte_identical_across_runs(rng):
    g = random_graph(rng, 25, 0.2)
    cfg = WalkConfig(walks_per_vertex=2, walk_length=6, beta=1.0, seed=77)
    bufs = []
    for _ in range(2):
        corpus = generate_walks(g, cfg)
        buf = io.StringIO()
        corpus.dump(buf, labels=g.labels)
        bufs.append(buf.getvalue().encode())
    assert bufs[0] == bufs[1]
    other = generate_walks(g, WalkConfig(walks_per_vertex=2, walk_length=6,
                                         beta=1.0, seed=78))
    buf = io.StringIO()
    other.dump(buf, labels=g.labels)
    assert buf.getvalue().encode() != bufs[0]


def test_baseline_walks_stay_on_edges(rng):
    g = random_graph(rng, 20, 0.15)
    cfg = WalkConfig(walks_per_vertex=2, walk_length=8, seed=3,
                     mode="deepwalk-baseline")
    corpus = generate_walks(g, cfg)
    nbr = [set(g.neighbors(v).tolist()) for v in range(g.n)]
    for w in corpus.walks:
        for a, b in zip(w, w[1:]):
            assert int(b) in nbr[int(a)]


def test_baseline_uniform_over_adjacency():
    g = load_edge_list(STAR)
    cfg = WalkConfig(walks_per_vertex=6000, walk_length=2, seed=5,
                     mode="deepwalk-baseline")
    corpus = generate_walks(g, cfg)
    from_center = [w[1] for w in corpus.walks if w[0] == 0]
    hits = np.bincount(from_center, minlength=4)
    for leaf in (1, 2, 3):
        assert hits[leaf] / 6000 == pytest.approx(1 / 3, abs=0.02)


def test_dp_beta_zero_differs_from_baseline_on_two_hop_graphs():
    g = load_edge_list(b"0 1\n1 2")  # path: 0 and 2 share neighbor 1
    dp = transition_distribution(g, 0.0, 0)
    assert set(dp) == {1, 2}       # two-hop vertex 2 reachable
    nbrs = set(g.neighbors(0).tolist())
    assert set(dp) != nbrs          # baseline support is adjacency only


def test_embed_walker_composition(rng):
    g = random_graph(rng, 18, 0.2)
    emb = embed_walker(g, WalkConfig(walks_per_vertex=2, walk_length=5, seed=0),
                       SkipGramConfig(k=4, epochs=1, seed=0))
    assert emb.vectors.shape == (g.n, 4)
    assert np.array_equal(emb.labels, g.labels)


def test_config_validation():
    with pytest.raises(ValueError):
        WalkConfig(walks_per_vertex=0)
    with pytest.raises(ValueError):
        WalkConfig(walk_length=1)
    with pytest.raises(ValueError):
        WalkConfig(mode="other")
    g = load_edge_list(STAR)
    with pytest.raises(ValueError):
        transition_distribution(g, 1.0, 99)
