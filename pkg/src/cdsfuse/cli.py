"""Command-line driver: generate synthetic data, fuse, inspect, evaluate.

Exit codes: 0 success, 2 usage/config error, 3 data inconsistency,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields
from pathlib import Path

import numpy as np

from cdsfuse import affinity, evalmetrics, matrixio, synth
from cdsfuse.cds import constrained_cluster
from cdsfuse.fusion import retrieve
from cdsfuse.matrixio import (KIND_DISTANCE, ConfigError, FusionConfig,
                              MatrixIOError)
from cdsfuse.nnselect import fixed_knn, incremental_knn, rank

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_CONFIG_FLOAT_FIELDS = ("npc", "lambda_scale", "lambda_mix", "eta", "theta",
                        "iota", "mu_epsilon", "rd_tol", "support_eps")
_CONFIG_INT_FIELDS = ("k_max", "rd_max_iter", "seed", "fixed_k")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", help="fusion config file (key=value lines)")
    for name in _CONFIG_FLOAT_FIELDS:
        parser.add_argument(f"--{name.replace('_', '-')}", type=float, default=None)
    for name in _CONFIG_INT_FIELDS:
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=None)
    parser.add_argument("--full-ranking", dest="full_ranking", action="store_true",
                        default=None)
    parser.add_argument("--no-full-ranking", dest="full_ranking", action="store_false")


def _build_config(args) -> FusionConfig:
    if args.config:
        cfg = FusionConfig.load(args.config)
    else:
        cfg = FusionConfig()
    overrides = {}
    for f in fields(FusionConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            overrides[f.name] = v
    if overrides:
        base = {f.name: getattr(cfg, f.name) for f in fields(FusionConfig)}
        base.update(overrides)
        cfg = FusionConfig(**base)
    return cfg


def _normalized_features(paths):
    features = []
    for p in paths:
        fm = matrixio.load_matrix(p)
        if fm.kind == KIND_DISTANCE:
            fm = affinity.similarity_from_distance(fm)
        features.append(affinity.minimax_normalize(fm))
    n_set = {fm.n for fm in features}
    if len(n_set) != 1:
        raise _DataError(f"feature matrices disagree on item count: {sorted(n_set)}")
    return features


class _DataError(Exception):
    pass


def cmd_gen(args) -> int:
    cfg = synth.SynthConfig.load(args.config_path)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    matrices, truth = synth.generate(cfg)
    for i, fm in enumerate(matrices):
        matrixio.save_matrix(fm, out / f"feature_{i:02d}.fsm")
    matrixio.save_ground_truth(truth, out / "truth.tsv")
    (out / "synth_config.txt").write_text(cfg.to_text())
    print(f"wrote {len(matrices)} matrices (n={cfg.n}) and truth to {out}")
    return EXIT_OK


def cmd_fuse(args) -> int:
    cfg = _build_config(args)
    features = _normalized_features(args.matrices)
    n = features[0].n
    if args.all_queries:
        queries = list(range(n))
    elif args.queries:
        queries = [int(tok) for tok in Path(args.queries).read_text().split()]
    else:
        raise ConfigError("need --queries FILE or --all-queries")
    for q in queries:
        if not 0 <= q < n:
            raise _DataError(f"query id {q} out of range [0,{n})")
    results = (retrieve(q, features, cfg) for q in queries)
    matrixio.save_results(results, args.out)
    print(f"wrote {len(queries)} fusion records to {args.out}")
    return EXIT_OK


def cmd_eval(args) -> int:
    results = matrixio.load_results(args.results)
    truth = matrixio.load_ground_truth(args.truth)
    per_query = {}
    for res in results:
        q = res.query
        if q not in truth:
            raise _DataError(f"query {q} missing from ground truth")
        if args.metric == "map":
            relevant = truth[q] - {q}
            if not relevant:
                raise _DataError(f"query {q} has no relevant items besides itself")
            per_query[q] = evalmetrics.average_precision(res.ranking.ids, relevant)
        else:
            group = truth[q] | {q}
            per_query[q] = evalmetrics.ns_score([q] + res.ranking.ids, group)
    report = evalmetrics.aggregate(per_query, args.metric)
    print(f"{report.metric}: mean={report.mean:.6f} over {report.query_count} queries")
    if args.out:
        import json

        Path(args.out).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    return EXIT_OK


def cmd_cds(args) -> int:
    cfg = _build_config(args)
    features = _normalized_features([args.matrix])
    fm = features[0]
    q = args.query
    if not 0 <= q < fm.n:
        raise ConfigError(f"query id {q} out of range [0,{fm.n})")
    ranked = rank(fm, q)
    if cfg.fixed_k is not None:
        nset = fixed_knn(ranked, cfg.fixed_k)
    else:
        nset = incremental_knn(ranked, cfg.npc, cfg.k_max)
    sub = affinity.build_subgraph(fm, [q] + nset.members)
    cluster = constrained_cluster(sub, cfg)
    print(f"query={q} neighbors={nset.members}")
    print(f"mu={cluster.mu:.9g} iterations={cluster.iterations}")
    print("x=" + " ".join(f"{v:.6g}" for v in cluster.membership))
    print(f"zeta={cluster.zeta:.9g}")
    print(f"support={cluster.support}")
    print(f"inliers={cluster.inliers}")
    print(f"outliers={cluster.outliers}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cdsfuse",
                                     description="multi-feature rank fusion")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic corpus")
    p_gen.add_argument("config_path")
    p_gen.add_argument("out_dir")
    p_gen.set_defaults(func=cmd_gen)

    p_fuse = sub.add_parser("fuse", help="fuse feature matrices for queries")
    p_fuse.add_argument("matrices", nargs="+", help="feature matrix files")
    p_fuse.add_argument("--queries", help="file of whitespace-separated query ids")
    p_fuse.add_argument("--all-queries", action="store_true")
    p_fuse.add_argument("--out", "-o", required=True)
    _add_config_flags(p_fuse)
    p_fuse.set_defaults(func=cmd_fuse)

    p_eval = sub.add_parser("eval", help="score a results file")
    p_eval.add_argument("results")
    p_eval.add_argument("truth")
    p_eval.add_argument("--metric", choices=["map", "ns"], required=True)
    p_eval.add_argument("--out", "-o")
    p_eval.set_defaults(func=cmd_eval)

    p_cds = sub.add_parser("cds", help="inspect one query's constrained cluster")
    p_cds.add_argument("matrix")
    p_cds.add_argument("query", type=int)
    _add_config_flags(p_cds)
    p_cds.set_defaults(func=cmd_cds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (_DataError, MatrixIOError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (np.linalg.LinAlgError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
