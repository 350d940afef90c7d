"""Command line front end.

Exit codes: 0 success, 1 a checked invariant was violated, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import harness
from .cutpack import build_cut_packing, cut_edges
from .embedder import DEFAULT_C_FALLBACK, DEFAULT_XI_CAP, embed_top
from .errors import InvariantViolation, MfembedError
from .frt import frt_embed
from .generators import generate
from .graphio import load_graph, save_graph
from .graphs import WeightedGraph, connected_components, induced_subgraph, is_connected
from .hierarchy import ChainFailure, build_chain
from .hosts import embedding_to_dict, load_embedding, save_embedding
from .partition import single_level_partition
from .rng import derive_seed

MAX_EXACT_N = 20000  # repeated-Dijkstra desk-scale guard


class _InputProblem(Exception):
    pass


def _load(path: str) -> WeightedGraph:
    try:
        g = load_graph(path)
    except MfembedError as exc:
        raise _InputProblem(str(exc)) from exc
    if g.n > MAX_EXACT_N:
        raise _InputProblem(f"instance too large for exact distances (n={g.n})")
    return g


def _add_gen(sub):
    p = sub.add_parser("gen", help="generate a benchmark instance")
    p.add_argument("kind", choices=["grid", "cycle", "star", "path"])
    p.add_argument("--rows", type=int, default=0)
    p.add_argument("--cols", type=int, default=0)
    p.add_argument("--n", type=int, default=0, help="size (vertices, or leaves for star)")
    p.add_argument("--weights", default="unit", help="unit or uniform:LO:HI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)


def _add_embed(sub):
    p = sub.add_parser("embed", help="compute a host embedding")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--mode", choices=["theory", "practical"], default="practical")
    p.add_argument("--xi-cap", type=int, default=DEFAULT_XI_CAP)
    p.add_argument("--tau-cap", type=int, default=None)
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--c-fallback", type=float, default=DEFAULT_C_FALLBACK)
    p.add_argument("--global-portal-distances", action="store_true")
    p.add_argument("--literal-level0", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)


def _add_frt(sub):
    p = sub.add_parser("frt", help="tree-embedding baseline")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)


def _add_eval(sub):
    p = sub.add_parser("eval", help="evaluate a stored embedding")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-e", "--embedding", required=True)
    p.add_argument("--pairs", default="all", help="sample size or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--csv", default=None)


def _add_experiment(sub):
    p = sub.add_parser("experiment", help="multi-run distortion experiment")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--mode", choices=["theory", "practical"], default="practical")
    p.add_argument("--runs", type=int, default=8)
    p.add_argument("--pairs", default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--baseline", choices=["none", "frt"], default="none")
    p.add_argument("--xi-cap", type=int, default=None)
    p.add_argument("--tau-cap", type=int, default=None)
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--csv", default=None)


def _add_debug(sub):
    p = sub.add_parser("partition", help="debug: one ball-carving round")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order-file", default=None, help="file with one vertex id per line")

    p = sub.add_parser("chain", help="debug: build a clustering chain")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--literal-level0", action="store_true")

    p = sub.add_parser("cuts", help="debug: build a cut packing")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--xi", type=int, default=8)
    p.add_argument("--tau", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mfembed",
        description="low-treedepth metric embeddings with distortion evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_gen(sub)
    _add_embed(sub)
    _add_frt(sub)
    _add_eval(sub)
    _add_experiment(sub)
    _add_debug(sub)
    return parser


def _pairs_arg(value: str) -> int | str:
    if value == "all":
        return "all"
    return int(value)


def _cmd_gen(args) -> int:
    g = generate(
        args.kind,
        rows=args.rows,
        cols=args.cols,
        size=args.n,
        weights=args.weights,
        seed=args.seed,
    )
    save_graph(g, args.out)
    print(f"wrote {args.out}: n={g.n} m={g.m}")
    return 0


def _cmd_embed(args) -> int:
    g = _load(args.input)
    kwargs = dict(
        mode=args.mode,
        xi_cap=args.xi_cap,
        tau_cap=args.tau_cap,
        gamma=args.gamma,
        c_fallback=args.c_fallback,
        global_portal_distances=args.global_portal_distances,
        literal_level0=args.literal_level0,
    )
    if is_connected(g):
        emb = embed_top(g, args.epsilon, seed=args.seed, **kwargs)
        save_embedding(emb, args.out)
        print(
            f"wrote {args.out}: host n={emb.host.n} depth={emb.depth} "
            f"fallback={emb.meta.fallback_used}"
        )
        return 0
    # Components embedded independently, emitted as a JSON array.
    blocks = []
    for k, comp in enumerate(connected_components(g)):
        sub, verts = induced_subgraph(g, comp)
        emb = embed_top(sub, args.epsilon, seed=derive_seed(args.seed, "component", k), **kwargs)
        block = embedding_to_dict(emb)
        block["vertices"] = verts
        blocks.append(block)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(blocks, fh, indent=1)
        fh.write("\n")
    print(f"wrote {args.out}: {len(blocks)} components")
    return 0


def _cmd_frt(args) -> int:
    g = _load(args.input)
    emb = frt_embed(g, args.seed)
    save_embedding(emb, args.out)
    print(f"wrote {args.out}: host n={emb.host.n} depth={emb.depth}")
    return 0


def _cmd_eval(args) -> int:
    g = _load(args.input)
    emb = load_embedding(args.embedding)
    pairs = harness.sample_pairs(g.n, _pairs_arg(args.pairs), args.seed)
    records = harness.evaluate(g, emb, pairs)
    violations = harness.count_violations(records)
    report = {
        "schema_version": harness.SCHEMA_VERSION,
        "config": {"instance": args.input, "embedding": args.embedding, "pairs": args.pairs},
        "n": g.n,
        "pairs": [[u, v] for u, v in pairs],
        "distortion": harness.aggregate_records(pairs, [records]),
    }
    harness.emit(report, "json", args.out)
    if args.csv:
        harness.emit(report, "csv", args.csv)
    print(f"wrote {args.out}: max ratio={report['distortion']['max_mean_ratio']}")
    if violations:
        print(f"non-contraction violations: {violations}", file=sys.stderr)
        return 1
    return 0


def _cmd_experiment(args) -> int:
    g = _load(args.input)
    config = harness.ExperimentConfig(
        epsilon=args.epsilon,
        mode=args.mode,
        runs=args.runs,
        pairs=_pairs_arg(args.pairs),
        seed=args.seed,
        baseline=args.baseline,
        instance_label=args.input,
        xi_cap=args.xi_cap,
        tau_cap=args.tau_cap,
    )
    report = harness.run_experiment(g, config)
    harness.emit(report, "json", args.out)
    if args.csv:
        harness.emit(report, "csv", args.csv)
    print(
        f"wrote {args.out}: max mean ratio={report['distortion']['max_mean_ratio']} "
        f"fallback rate={report['structural']['fallback_rate']}"
    )
    if report["distortion"]["violations"]:
        print("non-contraction violations detected", file=sys.stderr)
        return 1
    return 0


def _cmd_partition(args) -> int:
    g = _load(args.input)
    order = None
    if args.order_file:
        with open(args.order_file, encoding="utf-8") as fh:
            order = [int(line) for line in fh if line.strip()]
    clustering = single_level_partition(g, args.r, random.Random(args.seed), order=order)
    print(f"clusters={len(clustering)} base_r={clustering.base_r}")
    for i, (members, center, rv) in enumerate(
        zip(clustering.clusters, clustering.centers, clustering.radii)
    ):
        print(f"  {i}: center={center} radius={rv:.6g} size={len(members)} members={list(members)}")
    return 0


def _prepare_for_chain(g: WeightedGraph) -> WeightedGraph:
    # same preprocessing as the embedder: metric edge lengths, distances > 1
    from .graphs import metric_closure_weights, normalize

    scaled, scale = normalize(metric_closure_weights(g))
    if scale != 1.0:
        print(f"# rescaled by {scale:g} so all distances exceed 1")
    return scaled


def _cmd_chain(args) -> int:
    g = _prepare_for_chain(_load(args.input))
    result = build_chain(
        g, args.delta, random.Random(args.seed), literal_level0=args.literal_level0
    )
    if isinstance(result, ChainFailure):
        print(f"failure: level={result.level} reason={result.reason}")
        return 0
    for i, level in enumerate(result.levels):
        sizes = sorted((len(c) for c in level), reverse=True)
        print(f"level {i}: {len(level)} clusters, sizes {sizes[:12]}")
    return 0


def _cmd_cuts(args) -> int:
    g = _prepare_for_chain(_load(args.input))
    result = build_chain(g, args.delta, random.Random(args.seed))
    if isinstance(result, ChainFailure):
        print(f"chain failure: level={result.level} reason={result.reason}")
        return 0
    packing = build_cut_packing(g, result, args.xi, args.tau)
    print(f"packing size={len(packing.cuts)}")
    half = g.n // 2
    for i, cut in enumerate(packing.cuts):
        removed = cut_edges(g, cut)
        others = [
            len(c)
            for c in connected_components(g, removed_edges=removed)
            if frozenset(c) not in cut.family()
        ]
        margin = half - max(others, default=0)
        print(
            f"  cut {i}: members={len(cut)} levels={list(cut.levels)} "
            f"oversize={cut.oversize} balance_margin={margin}"
        )
    return 0


_HANDLERS = {
    "gen": _cmd_gen,
    "embed": _cmd_embed,
    "frt": _cmd_frt,
    "eval": _cmd_eval,
    "experiment": _cmd_experiment,
    "partition": _cmd_partition,
    "chain": _cmd_chain,
    "cuts": _cmd_cuts,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except _InputProblem as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 1
    except MfembedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
