import json

import numpy as np
import pytest

from dpne.cli import main
from dpne.embedding import read_embedding
from dpne.graph import load_edge_list


def run(args):
    return main([str(a) for a in args])


def test_generate_writes_edges_and_manifest(tmp_path):
    out = tmp_path / "g.edges"
    assert run(["generate", "--n", 50, "--m", 2, "--seed", 7, "--out", out]) == 0
    g = load_edge_list(str(out))
    assert g.n == 50
    manifest = json.loads((tmp_path / "g.edges.manifest.json").read_text())
    assert manifest["subcommand"] == "generate"
    assert manifest["flags"]["seed"] == 7
    assert manifest["outputs"] == [str(out)]
    assert manifest["version"]


def test_embed_header_and_roundtrip(tmp_path):
    edges = tmp_path / "g.edges"
    emb_path = tmp_path / "g.emb"
    run(["generate", "--n", 60, "--m", 3, "--seed", 1, "--out", edges])
    assert run(["embed", "--method", "dp-spectral", "--dim", 8, "--beta", "1.0",
                "--in", edges, "--out", emb_path]) == 0
    first = emb_path.read_text().splitlines()[0]
    assert first == "60 8"
    emb = read_embedding(str(emb_path))
    assert emb.k == 8 and emb.n == 60


@pytest.mark.parametrize("method", ["dp-walker", "deepwalk", "le"])
def test_other_methods_run(tmp_path, method):
    edges = tmp_path / "g.edges"
    emb_path = tmp_path / f"{method}.emb"
    run(["generate", "--n", 40, "--m", 2, "--seed", 3, "--out", edges])
    assert run(["embed", "--method", method, "--dim", 4, "--walks", 2,
                "--walk-length", 5, "--in", edges, "--out", emb_path]) == 0
    assert read_embedding(str(emb_path)).k == 4


def test_reconstruct_table_parseable(tmp_path):
    edges, emb, table = tmp_path / "g.edges", tmp_path / "g.emb", tmp_path / "t.tsv"
    run(["generate", "--n", 50, "--m", 2, "--seed", 5, "--out", edges])
    run(["embed", "--method", "dp-spectral", "--dim", 6, "--in", edges, "--out", emb])
    assert run(["reconstruct", "--graph", edges, "--emb", emb, "--out", table]) == 0
    lines = table.read_text().splitlines()
    assert lines[0].split("\t") == ["epsilon", "pearson", "spearman", "kendall", "edge_count"]
    assert len(lines) == 101
    float(lines[1].split("\t")[1])  # numeric cells


def test_fit_and_bounds_commands(tmp_path, capsys):
    edges = tmp_path / "g.edges"
    run(["generate", "--n", 500, "--m", 3, "--seed", 2, "--out", edges])
    report = tmp_path / "fit.txt"
    assert run(["fit", "--in", edges, "--out", report]) == 0
    assert "alpha" in report.read_text()

    assert run(["bounds", "--dim", 100, "--manifest", tmp_path / "b.json"]) == 0
    out = capsys.readouterr().out
    assert "4.06" in out

    degs = tmp_path / "degs.txt"
    rng = np.random.default_rng(1)
    degs.write_text("# degrees\n" + "\n".join(
        str(d) for d in rng.zipf(2.5, size=2000)))
    assert run(["fit", "--degrees", degs]) == 0
    assert "alpha" in capsys.readouterr().out


def test_linkpred_and_classify_commands(tmp_path):
    edges, emb = tmp_path / "g.edges", tmp_path / "g.emb"
    run(["generate", "--n", 120, "--m", 3, "--seed", 4, "--out", edges])
    run(["embed", "--method", "dp-spectral", "--dim", 8, "--in", edges, "--out", emb])
    lp = tmp_path / "lp.txt"
    assert run(["linkpred", "--graph", edges, "--emb", emb,
                "--sample-fraction", "0.5", "--seed", 1, "--out", lp]) == 0
    text = lp.read_text()
    assert "f1" in text and "precision" in text

    labels = tmp_path / "labels.txt"
    rng = np.random.default_rng(0)
    labels.write_text("\n".join(f"{v} {rng.integers(0, 2)}" for v in range(120)))
    cls = tmp_path / "cls.txt"
    assert run(["classify", "--emb", emb, "--labels", labels,
                "--seed", 1, "--out", cls]) == 0
    assert "accuracy" in cls.read_text()


def test_pipeline_combined_report(tmp_path):
    workdir = tmp_path / "run"
    assert run(["pipeline", "--n", 300, "--m", 4, "--seed", 9, "--method",
                "dp-spectral", "--dim", 12, "--beta", "1.0",
                "--workdir", workdir]) == 0
    report = (workdir / "report.txt").read_text()
    for section in ("[generate]", "[embed]", "[reconstruct]", "[fit]"):
        assert section in report
    assert "best_epsilon" in report and "ks" in report
    # every artifact reloadable by the toolkit's own parsers
    load_edge_list(str(workdir / "graph.edges"))
    read_embedding(str(workdir / "graph.emb"))


def test_rerun_with_manifest_flags_is_byte_identical(tmp_path):
    outputs = []
    for name in ("a", "b"):
        wd = tmp_path / name
        assert run(["pipeline", "--n", 150, "--m", 3, "--seed", 21, "--method",
                    "dp-walker", "--dim", 6, "--walks", 2, "--walk-length", 6,
                    "--deterministic", "--workdir", wd]) == 0
        manifest = json.loads((wd / "report.txt.manifest.json").read_text())
        assert manifest["flags"]["seed"] == 21
        outputs.append({p.name: p.read_bytes() for p in sorted(wd.iterdir())
                        if not p.name.endswith("manifest.json")})
    assert outputs[0] == outputs[1]


def test_corpus_dump_and_edge_emission(tmp_path):
    edges, emb = tmp_path / "g.edges", tmp_path / "g.emb"
    corpus, recon = tmp_path / "walks.txt", tmp_path / "recon.edges"
    run(["generate", "--n", 40, "--m", 2, "--seed", 6, "--out", edges])
    assert run(["embed", "--method", "dp-walker", "--dim", 4, "--walks", 2,
                "--walk-length", 5, "--in", edges, "--out", emb,
                "--dump-corpus", corpus]) == 0
    lines = corpus.read_text().splitlines()
    assert len(lines) == 2 * 40
    assert all(len(line.split()) == 5 for line in lines)

    assert run(["reconstruct", "--graph", edges, "--emb", emb,
                "--out", tmp_path / "t.tsv", "--emit-edges", recon]) == 0
    if recon.read_text().strip():
        load_edge_list(str(recon))  # loadable edge-list format


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_unknown_flag_exits_2(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "--n", "10", "--m", "1", "--out", "x", "--bogus"])
    assert exc.value.code == 2


def test_module_error_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("0 x\n")
    assert run(["embed", "--method", "le", "--dim", 2,
                "--in", bad, "--out", tmp_path / "e"]) == 1
    assert "error:" in capsys.readouterr().err


def test_invalid_generate_config_exits_1(tmp_path):
    assert run(["generate", "--n", 3, "--m", 5, "--out", tmp_path / "g"]) == 1
