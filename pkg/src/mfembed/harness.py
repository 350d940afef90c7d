"""Monte-Carlo distortion evaluation and experiment orchestration.

Distortion is estimated per pair (mean host/graph ratio across runs) and
then maximized over pairs; the per-pair view matches the guarantee being
measured. Non-contraction is checked with a 1e-9 relative tolerance, the
numerical reading of an exact invariant.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from pathlib import Path

from .embedder import embed_top
from .errors import PairOutOfRange, PreconditionViolation
from .frt import frt_embed
from .graphs import WeightedGraph, dijkstra
from .hosts import HostEmbedding
from .rng import derive_seed

SCHEMA_VERSION = 1
RATIO_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PairRecord:
    u: int
    v: int
    run: int
    dist_g: float
    dist_h: float

    @property
    def ratio(self) -> float:
        return self.dist_h / self.dist_g


def evaluate(
    g: WeightedGraph,
    emb: HostEmbedding,
    pairs: list[tuple[int, int]],
    run: int = 0,
    dist_g_rows: dict[int, list[float]] | None = None,
) -> list[PairRecord]:
    """Exact graph and host distances for the given vertex pairs."""
    if len(emb.eta) != g.n:
        raise PreconditionViolation(
            f"embedding maps {len(emb.eta)} vertices but the graph has {g.n}"
        )
    for u, v in pairs:
        if not (0 <= u < g.n and 0 <= v < g.n) or u == v:
            raise PairOutOfRange(f"bad pair ({u},{v})")
    g_rows: dict[int, list[float]] = dist_g_rows if dist_g_rows is not None else {}
    h_rows: dict[int, list[float]] = {}
    records = []
    for u, v in pairs:
        if u not in g_rows:
            g_rows[u] = dijkstra(g, u)
        src = emb.eta[u]
        if src not in h_rows:
            h_rows[src] = dijkstra(emb.host, src)
        records.append(
            PairRecord(u=u, v=v, run=run, dist_g=g_rows[u][v], dist_h=h_rows[src][emb.eta[v]])
        )
    return records


def count_violations(records: list[PairRecord]) -> int:
    return sum(1 for r in records if r.dist_h < r.dist_g * (1.0 - RATIO_TOLERANCE))


@dataclass
class ExperimentConfig:
    """What to run: instance, embedding settings, replication, sampling."""

    epsilon: float
    mode: str
    runs: int
    pairs: int | str  # count or "all"
    seed: int
    baseline: str = "none"  # "none" | "frt"
    instance_label: str = ""
    xi_cap: int | None = None
    tau_cap: int | None = None
    gamma: float = 1.0
    c_fallback: float = 64.0

    def to_dict(self) -> dict:
        return {
            "instance": self.instance_label,
            "epsilon": self.epsilon,
            "mode": self.mode,
            "runs": self.runs,
            "pairs": self.pairs,
            "seed": self.seed,
            "baseline": self.baseline,
            "xi_cap": self.xi_cap,
            "tau_cap": self.tau_cap,
            "gamma": self.gamma,
            "c_fallback": self.c_fallback,
        }


def sample_pairs(n: int, count: int | str, seed: int) -> list[tuple[int, int]]:
    """Unordered pairs, uniform without replacement, from the master seed."""
    universe = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if count == "all" or (isinstance(count, int) and count >= len(universe)):
        return universe
    if not isinstance(count, int) or count < 1:
        raise PreconditionViolation("pair sample size must be >= 1 or 'all'")
    rng = random.Random(derive_seed(seed, "pairs"))
    return sorted(rng.sample(universe, count))


def aggregate_records(pairs, runs_records):
    per_pair = []
    max_mean = None
    all_ratios = []
    max_single = None
    violations = 0
    by_pair: dict[tuple[int, int], list[PairRecord]] = {(u, v): [] for u, v in pairs}
    for records in runs_records:
        violations += count_violations(records)
        for r in records:
            by_pair[(r.u, r.v)].append(r)
            all_ratios.append(r.ratio)
    for u, v in pairs:
        recs = by_pair[(u, v)]
        ratios = [r.ratio for r in recs]
        entry = {
            "u": u,
            "v": v,
            "dist_g": recs[0].dist_g,
            "mean_dist_h": sum(r.dist_h for r in recs) / len(recs),
            "mean_ratio": sum(ratios) / len(ratios),
            "max_ratio": max(ratios),
        }
        per_pair.append(entry)
        max_mean = entry["mean_ratio"] if max_mean is None else max(max_mean, entry["mean_ratio"])
        peak = max(ratios)
        max_single = peak if max_single is None else max(max_single, peak)
    return {
        "per_pair": per_pair,
        "max_mean_ratio": max_mean,
        "global_mean_ratio": (sum(all_ratios) / len(all_ratios)) if all_ratios else None,
        "max_single_run_ratio": max_single,
        "violations": violations,
    }


def run_experiment(
    g: WeightedGraph,
    config: ExperimentConfig,
    seed_for_run=None,
) -> dict:
    """R independent embeddings with derived seeds; returns the report dict.

    `seed_for_run` overrides per-run seed derivation (test hook).
    """
    if config.runs < 1:
        raise PreconditionViolation("need at least one run")
    pairs = sample_pairs(g.n, config.pairs, config.seed)
    dist_g_rows: dict[int, list[float]] = {}
    runs_records = []
    structural = []
    timings = []
    started = time.perf_counter()
    for run in range(config.runs):
        run_seed = seed_for_run(run) if seed_for_run else derive_seed(config.seed, "run", run)
        t0 = time.perf_counter()
        emb = embed_top(
            g,
            config.epsilon,
            config.mode,
            run_seed,
            gamma=config.gamma,
            c_fallback=config.c_fallback,
            **_cap_kwargs(config),
        )
        records = evaluate(g, emb, pairs, run=run, dist_g_rows=dist_g_rows)
        timings.append(time.perf_counter() - t0)
        runs_records.append(records)
        structural.append(
            {
                "seed": run_seed,
                "treedepth": emb.depth,
                "host_vertices": emb.host.n,
                "host_edges": emb.host.m,
                "fallback": emb.meta.fallback_used,
                "packing_sizes": list(emb.meta.packing_sizes),
                "oversize_cuts": emb.meta.oversize_cuts,
                "recursion_depth": emb.meta.recursion_depth,
            }
        )
    baseline_block = None
    if config.baseline == "frt":
        base_records = []
        base_structural = []
        for run in range(config.runs):
            run_seed = seed_for_run(run) if seed_for_run else derive_seed(config.seed, "frt", run)
            emb = frt_embed(g, run_seed)
            base_records.append(evaluate(g, emb, pairs, run=run, dist_g_rows=dist_g_rows))
            base_structural.append(
                {"seed": run_seed, "treedepth": emb.depth, "host_vertices": emb.host.n}
            )
        baseline_block = {
            "distortion": aggregate_records(pairs, base_records),
            "structural": {"per_run": base_structural},
        }
    fallbacks = sum(1 for s in structural if s["fallback"])
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "n": g.n,
        "pairs": [[u, v] for u, v in pairs],
        "distortion": aggregate_records(pairs, runs_records),
        "structural": {
            "per_run": structural,
            "fallback_rate": fallbacks / config.runs,
            "mean_treedepth": sum(s["treedepth"] for s in structural) / config.runs,
        },
        "baseline": baseline_block,
        "timing": {
            "total_s": time.perf_counter() - started,
            "per_run_s": timings,
        },
    }
    return report


def _cap_kwargs(config: ExperimentConfig) -> dict:
    kwargs = {}
    if config.xi_cap is not None:
        kwargs["xi_cap"] = config.xi_cap
    if config.tau_cap is not None:
        kwargs["tau_cap"] = config.tau_cap
    return kwargs


def strip_timing(report: dict) -> dict:
    """Copy of the report without wall-clock fields (determinism checks)."""
    out = json.loads(json.dumps(report))
    out.pop("timing", None)
    return out


def emit(report: dict, fmt: str, path: str | Path) -> None:
    """Write the report: JSON holds everything, CSV the per-pair table."""
    path = Path(path)
    if fmt == "json":
        path.write_text(json.dumps(report, indent=1) + "\n", encoding="utf-8")
    elif fmt == "csv":
        lines = ["u,v,dist_g,mean_dist_h,mean_ratio,max_ratio"]
        for row in report["distortion"]["per_pair"]:
            lines.append(
                f'{row["u"]},{row["v"]},{row["dist_g"]!r},{row["mean_dist_h"]!r},'
                f'{row["mean_ratio"]!r},{row["max_ratio"]!r}'
            )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    else:
        raise PreconditionViolation(f"unknown format {fmt!r}")


def load_report(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
