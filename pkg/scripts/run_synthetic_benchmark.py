#!/usr/bin/env python3
"""Synthetic benchmark: degree preservation and link prediction, all methods.

Generates one preferential-attachment graph, embeds it with both
degree-penalized methods (best beta out of a sweep set) and both baselines,
sweeps the reconstruction threshold, fits a power law to the best-threshold
degrees, and runs link prediction. Writes a TSV of per-run rows plus a
summary, and exits nonzero if the headline gaps fail.

Usage:
    python scripts/run_synthetic_benchmark.py --smoke          # ~2 min
    python scripts/run_synthetic_benchmark.py                  # full scale, ~30 min
    python scripts/run_synthetic_benchmark.py --n 4000 --k 96  # custom
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

import dpne
from dpne.powerlaw import PowerLawFitError, fit_power_law
from dpne.reconstruct import sweep_epsilon
from dpne.skipgram import SkipGramConfig
from dpne.spectral import SpectralConfig, embed_spectral
from dpne.tasks import link_prediction_eval
from dpne.walker import WalkConfig, embed_walker

DEFAULT_BETAS = (0.5, 1.0, 2.0)


def evaluate(name, emb, graph, args, rows):
    t0 = time.time()
    best, _ = sweep_epsilon(emb, graph)
    try:
        ks = fit_power_law(best.reconstructed_degrees).ks
    except PowerLawFitError:
        ks = math.nan
    lp = link_prediction_eval(emb, graph, sample_fraction=args.sample_fraction,
                              seed=args.seed)
    row = dict(run=name, epsilon=best.epsilon, pearson=best.pearson,
               spearman=best.spearman, kendall=best.kendall, ks=ks, f1=lp.f1,
               seconds=round(time.time() - t0, 1))
    rows.append(row)
    print(f"  {name:22s} eps={best.epsilon:.2f} pearson={best.pearson:+.3f} "
          f"ks={ks:.4f} f1={lp.f1:.3f}")
    return row


def best_by_pearson(rows, prefix):
    candidates = [r for r in rows if r["run"].startswith(prefix)]
    return max(candidates, key=lambda r: -math.inf if math.isnan(r["pearson"]) else r["pearson"])


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=10_000)
    parser.add_argument("--m", type=int, default=40)
    parser.add_argument("--k", type=int, default=200)
    parser.add_argument("--seed", type=int, default=20260810)
    parser.add_argument("--betas", type=float, nargs="+", default=list(DEFAULT_BETAS))
    parser.add_argument("--walks", type=int, default=10)
    parser.add_argument("--walk-length", type=int, default=40)
    parser.add_argument("--window", type=int, default=5)
    parser.add_argument("--sample-fraction", type=float, default=0.01)
    parser.add_argument("--smoke", action="store_true",
                        help="reduced preset: n=2000, k=64")
    parser.add_argument("--out", default="benchmark_results",
                        help="output directory for the results table")
    args = parser.parse_args(argv)
    if args.smoke:
        args.n, args.k = 2000, 64
        args.sample_fraction = max(args.sample_fraction, 0.05)

    logging.basicConfig(level=logging.WARNING)
    t00 = time.time()
    print(f"generating PA graph: n={args.n} m={args.m} seed={args.seed}")
    graph = dpne.generate_pa(dpne.PaConfig(n=args.n, m=args.m, seed=args.seed))
    print(f"  |E| = {graph.num_edges}, max degree {graph.degree.max()}")

    rows = []
    for beta in args.betas:
        emb = embed_spectral(graph, SpectralConfig(k=args.k, beta=beta, seed=args.seed))
        evaluate(f"dp-spectral beta={beta}", emb, graph, args, rows)
    emb = embed_spectral(graph, SpectralConfig(k=args.k, mode="le-baseline", seed=args.seed))
    evaluate("le-baseline", emb, graph, args, rows)

    scfg = SkipGramConfig(k=args.k, window=args.window, seed=args.seed)
    for beta in args.betas:
        emb = embed_walker(graph, WalkConfig(walks_per_vertex=args.walks,
                                             walk_length=args.walk_length,
                                             beta=beta, seed=args.seed), scfg)
        evaluate(f"dp-walker beta={beta}", emb, graph, args, rows)
    emb = embed_walker(graph, WalkConfig(walks_per_vertex=args.walks,
                                         walk_length=args.walk_length,
                                         seed=args.seed, mode="deepwalk-baseline"), scfg)
    evaluate("deepwalk-baseline", emb, graph, args, rows)

    # random-embedding control for the link-prediction margin
    rng = np.random.default_rng(args.seed)
    control = dpne.Embedding(labels=graph.labels,
                             vectors=rng.standard_normal((graph.n, args.k)))
    lp0 = link_prediction_eval(control, graph, sample_fraction=args.sample_fraction,
                               seed=args.seed)
    print(f"  {'random-control':22s} f1={lp0.f1:.3f}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    table = out_dir / "synthetic_benchmark.tsv"
    cols = ["run", "epsilon", "pearson", "spearman", "kendall", "ks", "f1", "seconds"]
    with open(table, "w", encoding="utf-8") as fh:
        fh.write("\t".join(cols) + "\n")
        for r in rows:
            fh.write("\t".join(str(r[c]) for c in cols) + "\n")
        fh.write(f"random-control\t\t\t\t\t\t{lp0.f1}\t\n")

    spec = best_by_pearson(rows, "dp-spectral")
    walk = best_by_pearson(rows, "dp-walker")
    le = best_by_pearson(rows, "le-baseline")
    dw = best_by_pearson(rows, "deepwalk-baseline")
    print(f"\nbest dp-spectral: {spec['run']} pearson {spec['pearson']:.3f} "
          f"(le {le['pearson']:.3f}, gap {spec['pearson'] - le['pearson']:.3f})")
    print(f"best dp-walker:   {walk['run']} pearson {walk['pearson']:.3f} "
          f"(deepwalk {dw['pearson']:.3f}, gap {walk['pearson'] - dw['pearson']:.3f})")
    print(f"ks: dp-spectral {spec['ks']:.4f} vs le {le['ks']:.4f}; "
          f"dp-walker {walk['ks']:.4f} vs deepwalk {dw['ks']:.4f}")
    print(f"link prediction: dp-spectral {spec['f1']:.3f} vs random {lp0.f1:.3f}")
    print(f"results -> {table}   total {time.time() - t00:.0f}s")

    ok = (spec["pearson"] >= 0.75
          and spec["pearson"] - le["pearson"] >= 0.3
          and walk["pearson"] - dw["pearson"] >= 0.2)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
