"""Benchmark instance generators. All shapes are planar by construction."""

from __future__ import annotations

import random

from .errors import BadSize
from .graphs import WeightedGraph

KINDS = ("grid", "cycle", "star", "path")


def _weights(edges: list[tuple[int, int]], model: str, seed: int) -> list[float]:
    if model == "unit":
        return [1.0] * len(edges)
    if model.startswith("uniform:"):
        try:
            _, lo_s, hi_s = model.split(":")
            lo, hi = float(lo_s), float(hi_s)
        except ValueError as exc:
            raise BadSize(f"bad weight model {model!r}") from exc
        if lo <= 0 or hi < lo:
            raise BadSize("uniform weights need 0 < lo <= hi")
        rng = random.Random(seed)
        return [rng.uniform(lo, hi) for _ in edges]
    raise BadSize(f"unknown weight model {model!r}")


def grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return edges


def generate(
    kind: str,
    *,
    rows: int = 0,
    cols: int = 0,
    size: int = 0,
    weights: str = "unit",
    seed: int = 0,
) -> WeightedGraph:
    """Build a named instance; deterministic for a given seed.

    grid uses rows x cols; cycle/path use `size` vertices; star uses `size`
    leaves around center vertex 0.
    """
    if kind == "grid":
        if rows < 1 or cols < 1:
            raise BadSize("grid needs rows >= 1 and cols >= 1")
        n = rows * cols
        edges = grid_edges(rows, cols)
    elif kind == "cycle":
        if size < 3:
            raise BadSize("cycle needs at least 3 vertices")
        n = size
        edges = [(i, i + 1) for i in range(size - 1)] + [(0, size - 1)]
    elif kind == "star":
        if size < 1:
            raise BadSize("star needs at least 1 leaf")
        n = size + 1
        edges = [(0, i) for i in range(1, n)]
    elif kind == "path":
        if size < 1:
            raise BadSize("path needs at least 1 vertex")
        n = size
        edges = [(i, i + 1) for i in range(size - 1)]
    else:
        raise BadSize(f"unknown kind {kind!r}")
    ws = _weights(edges, weights, seed)
    return WeightedGraph(n, tuple((u, v, w) for (u, v), w in zip(edges, ws)))
