"""End-to-end command-line driver checks."""

import json

import numpy as np
import pytest

from cdsfuse import matrixio
from cdsfuse.cli import (EXIT_DATA, EXIT_OK, EXIT_USAGE, main)
from cdsfuse.matrixio import FeatureMatrix, KIND_DISTANCE


SYNTH_CFG = """\
groups=8
group_size=4
dims=8
feature_noises=0.1,0.3
seed=11
"""


@pytest.fixture()
def corpus_dir(tmp_path):
    cfg_path = tmp_path / "synth.txt"
    cfg_path.write_text(SYNTH_CFG)
    out = tmp_path / "data"
    assert main(["gen", str(cfg_path), str(out)]) == EXIT_OK
    return out


def test_gen_outputs(corpus_dir):
    assert (corpus_dir / "feature_00.fsm").exists()
    assert (corpus_dir / "feature_01.fsm").exists()
    assert (corpus_dir / "truth.tsv").exists()
    fm = matrixio.load_matrix(corpus_dir / "feature_00.fsm")
    assert fm.n == 32
    truth = matrixio.load_ground_truth(corpus_dir / "truth.tsv")
    assert len(truth) == 32


def test_fuse_and_eval(corpus_dir, tmp_path):
    queries = tmp_path / "queries.txt"
    queries.write_text("0 4 8\n")
    results = tmp_path / "results.jsonl"
    rc = main(["fuse", str(corpus_dir / "feature_00.fsm"),
               str(corpus_dir / "feature_01.fsm"),
               "--queries", str(queries), "--out", str(results)])
    assert rc == EXIT_OK
    loaded = matrixio.load_results(results)
    assert [r.query for r in loaded] == [0, 4, 8]

    report = tmp_path / "report.json"
    rc = main(["eval", str(results), str(corpus_dir / "truth.tsv"),
               "--metric", "ns", "--out", str(report)])
    assert rc == EXIT_OK
    data = json.loads(report.read_text())
    assert data["metric"] == "ns"
    assert 0.0 <= data["mean"] <= 4.0

    rc = main(["eval", str(results), str(corpus_dir / "truth.tsv"),
               "--metric", "map"])
    assert rc == EXIT_OK


def test_fuse_all_queries(corpus_dir, tmp_path):
    results = tmp_path / "results.jsonl"
    rc = main(["fuse", str(corpus_dir / "feature_00.fsm"),
               str(corpus_dir / "feature_01.fsm"),
               "--all-queries", "--out", str(results)])
    assert rc == EXIT_OK
    assert len(matrixio.load_results(results)) == 32


def test_fuse_needs_query_selection(corpus_dir, tmp_path):
    rc = main(["fuse", str(corpus_dir / "feature_00.fsm"),
               "--out", str(tmp_path / "r.jsonl")])
    assert rc == EXIT_USAGE


def test_fuse_query_out_of_range(corpus_dir, tmp_path):
    queries = tmp_path / "queries.txt"
    queries.write_text("999\n")
    rc = main(["fuse", str(corpus_dir / "feature_00.fsm"),
               "--queries", str(queries), "--out", str(tmp_path / "r.jsonl")])
    assert rc == EXIT_DATA


def test_fuse_mismatched_sizes(corpus_dir, tmp_path):
    small = FeatureMatrix(values=np.zeros((4, 4)), kind=KIND_DISTANCE)
    small.values[0, 1] = small.values[1, 0] = 1.0
    small_path = tmp_path / "small.fsm"
    matrixio.save_matrix(small, small_path)
    rc = main(["fuse", str(corpus_dir / "feature_00.fsm"), str(small_path),
               "--all-queries", "--out", str(tmp_path / "r.jsonl")])
    assert rc == EXIT_DATA


def test_bad_matrix_header(tmp_path):
    bad = tmp_path / "bad.fsm"
    bad.write_bytes(b"JUNKJUNKJUNKJUNK")
    rc = main(["fuse", str(bad), "--all-queries",
               "--out", str(tmp_path / "r.jsonl")])
    assert rc == EXIT_DATA


def test_missing_file_is_usage_error(tmp_path):
    rc = main(["fuse", str(tmp_path / "nope.fsm"), "--all-queries",
               "--out", str(tmp_path / "r.jsonl")])
    assert rc == EXIT_USAGE


def test_bad_config_key(corpus_dir, tmp_path):
    cfg = tmp_path / "fusion.cfg"
    cfg.write_text("nonsense=1\n")
    rc = main(["fuse", str(corpus_dir / "feature_00.fsm"), "--all-queries",
               "--config", str(cfg), "--out", str(tmp_path / "r.jsonl")])
    assert rc == EXIT_USAGE


def test_config_flag_overrides(corpus_dir, tmp_path, capsys):
    rc = main(["cds", str(corpus_dir / "feature_00.fsm"), "0",
               "--fixed-k", "5"])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "query=0" in out
    assert "inliers=" in out
    # fixed k keeps exactly five neighbors in the subgraph
    neighbors = out.splitlines()[0].split("neighbors=")[1]
    assert len(eval(neighbors)) == 5


def test_unknown_subcommand():
    assert main(["frobnicate"]) == EXIT_USAGE
