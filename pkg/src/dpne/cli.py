"""Command-line toolkit: generation, embedding, reconstruction, fitting,
bounds, and downstream tasks, each emitting a JSON run manifest.

All randomness flows from --seed through documented derivations; rerunning a
deterministic-mode command with the flags recorded in its manifest reproduces
its output files byte for byte.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import format_report, sphere_bounds
from .embedding import read_embedding, write_embedding
from .generator import PaConfig, generate_pa
from .graph import load_edge_list, save_edge_list
from .powerlaw import fit_power_law, format_fit
from .reconstruct import reconstruct_edges, sweep_epsilon, write_sweep_table
from .skipgram import SkipGramConfig, train_skipgram
from .spectral import SpectralConfig, embed_spectral
from .tasks import link_prediction_eval, vertex_classification_eval
from .walker import WalkConfig, embed_walker, generate_walks

log = logging.getLogger(__name__)

METHODS = ("dp-spectral", "dp-walker", "le", "deepwalk")


def _write_manifest(path: Path, subcommand: str, flags: dict, inputs: list[str],
                    outputs: list[str], started: float) -> None:
    manifest = {
        "subcommand": subcommand,
        "flags": flags,
        "seed": flags.get("seed"),
        "inputs": inputs,
        "outputs": outputs,
        "version": __version__,
        "duration_s": round(time.time() - started, 3),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _flags_dict(args: argparse.Namespace) -> dict:
    skip = {"func", "manifest"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _manifest_path(args: argparse.Namespace, primary_output: str | None) -> Path:
    if args.manifest:
        return Path(args.manifest)
    if primary_output:
        return Path(str(primary_output) + ".manifest.json")
    return Path(f"{args.subcommand}.manifest.json")


def _embed_one(graph, method: str, args: argparse.Namespace):
    if method in ("dp-spectral", "le"):
        cfg = SpectralConfig(
            k=args.dim, beta=args.beta, tol=args.tol,
            max_iter=args.max_iter, seed=args.seed,
            mode="dp-spectral" if method == "dp-spectral" else "le-baseline")
        return embed_spectral(graph, cfg)
    wcfg = WalkConfig(
        walks_per_vertex=args.walks, walk_length=args.walk_length,
        beta=args.beta, seed=args.seed,
        mode="dp-walker" if method == "dp-walker" else "deepwalk-baseline")
    scfg = SkipGramConfig(
        k=args.dim, window=args.window, epochs=args.epochs,
        seed=args.seed, deterministic=args.deterministic)
    return embed_walker(graph, wcfg, scfg)


def _cmd_generate(args) -> tuple[list[str], list[str]]:
    g = generate_pa(PaConfig(n=args.n, m=args.m, seed=args.seed))
    save_edge_list(g, args.out)
    print(f"generated graph: {g.n} vertices, {g.num_edges} edges -> {args.out}")
    return [], [args.out]


def _cmd_embed(args) -> tuple[list[str], list[str]]:
    g = load_edge_list(args.in_path)
    outputs = [args.out]
    if args.dump_corpus and args.method in ("dp-walker", "deepwalk"):
        wcfg = WalkConfig(
            walks_per_vertex=args.walks, walk_length=args.walk_length,
            beta=args.beta, seed=args.seed,
            mode="dp-walker" if args.method == "dp-walker" else "deepwalk-baseline")
        corpus = generate_walks(g, wcfg)
        corpus.dump(args.dump_corpus, labels=g.labels)
        outputs.append(args.dump_corpus)
        scfg = SkipGramConfig(k=args.dim, window=args.window, epochs=args.epochs,
                              seed=args.seed, deterministic=args.deterministic)
        emb = train_skipgram(corpus, scfg, labels=g.labels).embedding
    else:
        emb = _embed_one(g, args.method, args)
    write_embedding(emb, args.out)
    print(f"embedded {emb.n} vertices in {emb.k} dimensions -> {args.out}")
    return [args.in_path], outputs


def _cmd_reconstruct(args) -> tuple[list[str], list[str]]:
    g = load_edge_list(args.graph)
    emb = read_embedding(args.emb)
    best, table = sweep_epsilon(emb, g, args.eps_start, args.eps_end, args.eps_step)
    write_sweep_table(table, args.out)
    outputs = [args.out]
    if args.emit_edges:
        pairs = reconstruct_edges(emb, best.epsilon)
        with open(args.emit_edges, "w", encoding="utf-8") as fh:
            for i, j in pairs:
                fh.write(f"{emb.labels[i]} {emb.labels[j]}\n")
        outputs.append(args.emit_edges)
    print(f"best epsilon {best.epsilon:.4g}: pearson {best.pearson:.4f} "
          f"spearman {best.spearman:.4f} kendall {best.kendall:.4f} "
          f"edges {best.edge_count}")
    return [args.graph, args.emb], outputs


def _read_degree_file(path: str) -> np.ndarray:
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                values.append(int(line))
    return np.array(values, dtype=np.int64)


def _cmd_fit(args) -> tuple[list[str], list[str]]:
    if args.degrees:
        degs = _read_degree_file(args.degrees)
        source = args.degrees
    else:
        degs = load_edge_list(args.in_path).degree
        source = args.in_path
    fit = fit_power_law(degs)
    text = format_fit(fit)
    print(text)
    outputs = []
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        outputs.append(args.out)
    return [source], outputs


def _cmd_bounds(args) -> tuple[list[str], list[str]]:
    text = format_report(sphere_bounds(args.dim))
    print(text)
    outputs = []
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        outputs.append(args.out)
    return [], outputs


def _cmd_linkpred(args) -> tuple[list[str], list[str]]:
    g = load_edge_list(args.graph)
    emb = read_embedding(args.emb)
    rep = link_prediction_eval(emb, g, sample_fraction=args.sample_fraction,
                               seed=args.seed)
    text = (f"precision {rep.precision:.6g}\nrecall {rep.recall:.6g}\n"
            f"f1 {rep.f1:.6g}\n")
    print(text, end="")
    outputs = []
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        outputs.append(args.out)
    return [args.graph, args.emb], outputs


def _read_labels_file(path: str) -> dict[int, int]:
    labels = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            u, c = line.split()
            labels[int(u)] = int(c)
    return labels


def _cmd_classify(args) -> tuple[list[str], list[str]]:
    emb = read_embedding(args.emb)
    labels = _read_labels_file(args.labels)
    rep = vertex_classification_eval(emb, labels, seed=args.seed)
    lines = [f"accuracy {rep.accuracy:.6g}"]
    for c, acc in sorted(rep.per_class_accuracy.items()):
        lines.append(f"class {c} accuracy {acc:.6g}")
    for c in rep.skipped_classes:
        lines.append(f"class {c} skipped (too few examples)")
    text = "\n".join(lines) + "\n"
    print(text, end="")
    outputs = []
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        outputs.append(args.out)
    return [args.emb, args.labels], outputs


def _cmd_pipeline(args) -> tuple[list[str], list[str]]:
    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    edges_path = workdir / "graph.edges"
    emb_path = workdir / "graph.emb"
    sweep_path = workdir / "sweep.tsv"
    report_path = workdir / "report.txt"

    g = generate_pa(PaConfig(n=args.n, m=args.m, seed=args.seed))
    save_edge_list(g, edges_path)
    emb = _embed_one(g, args.method, args)
    write_embedding(emb, emb_path)
    best, table = sweep_epsilon(emb, g, args.eps_start, args.eps_end, args.eps_step)
    write_sweep_table(table, sweep_path)
    fit_text = format_fit(fit_power_law(best.reconstructed_degrees))

    sections = [
        "[generate]",
        f"n {g.n}\nedges {g.num_edges}\nseed {args.seed}",
        "",
        "[embed]",
        f"method {args.method}\ndim {args.dim}\nbeta {args.beta}",
        "",
        "[reconstruct]",
        f"best_epsilon {best.epsilon:.6g}\npearson {best.pearson:.6g}\n"
        f"spearman {best.spearman:.6g}\nkendall {best.kendall:.6g}\n"
        f"edge_count {best.edge_count}",
        "",
        "[fit]",
        fit_text,
    ]
    report_path.write_text("\n".join(sections) + "\n", encoding="utf-8")
    print(f"pipeline complete -> {report_path}")
    print("\n".join(sections))
    return [], [str(report_path), str(edges_path), str(emb_path), str(sweep_path)]


def _add_embed_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--dim", type=int, default=128, help="embedding dimension")
    p.add_argument("--beta", type=float, default=1.0, help="degree-penalty strength")
    p.add_argument("--tol", type=float, default=1e-8, help="eigensolver residual tolerance")
    p.add_argument("--max-iter", type=int, default=None, help="eigensolver iteration cap")
    p.add_argument("--walks", type=int, default=10, help="walks per vertex")
    p.add_argument("--walk-length", type=int, default=40)
    p.add_argument("--window", type=int, default=5, help="skip-gram context window")
    p.add_argument("--epochs", type=int, default=1, help="skip-gram epochs")
    p.add_argument("--deterministic", action=argparse.BooleanOptionalAction,
                   default=True, help="single-worker reproducible training")
    p.add_argument("--dump-corpus", help="also write the walk corpus (walker methods)")


def _add_eps_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps-start", type=float, default=0.01)
    p.add_argument("--eps-end", type=float, default=1.0)
    p.add_argument("--eps-step", type=float, default=0.01)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpne",
        description="Degree-penalized network embedding toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("generate", help="synthesize a preferential-attachment graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("embed", help="learn vertex embeddings from an edge list")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    _add_embed_flags(p)
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser("reconstruct", help="sweep epsilon and score degree preservation")
    p.add_argument("--graph", required=True)
    p.add_argument("--emb", required=True)
    p.add_argument("--out", required=True, help="sweep table destination")
    p.add_argument("--emit-edges", help="write the best-threshold edge set here (small n)")
    p.add_argument("--seed", type=int, default=0)
    _add_eps_flags(p)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("fit", help="fit a power law to a degree sequence")
    p.add_argument("--in", dest="in_path", help="edge list whose degrees to fit")
    p.add_argument("--degrees", help="file of one integer degree per line")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("bounds", help="separated-point packing bounds in dimension k")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("linkpred", help="link-prediction evaluation of an embedding")
    p.add_argument("--graph", required=True)
    p.add_argument("--emb", required=True)
    p.add_argument("--sample-fraction", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_linkpred)

    p = sub.add_parser("classify", help="vertex-classification evaluation")
    p.add_argument("--emb", required=True)
    p.add_argument("--labels", required=True, help="lines of 'vertex_label class_id'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("pipeline", help="generate -> embed -> reconstruct -> fit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workdir", required=True)
    _add_embed_flags(p)
    _add_eps_flags(p)
    p.set_defaults(func=_cmd_pipeline)

    for sp in sub.choices.values():
        sp.add_argument("--manifest", help="manifest destination (default: <output>.manifest.json)")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        inputs, outputs = args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _write_manifest(_manifest_path(args, outputs[0] if outputs else None),
                    args.subcommand, _flags_dict(args), inputs, outputs, started)
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
