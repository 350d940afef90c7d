"""Weighted-graph core: representation, shortest paths, metric utilities.

A `WeightedGraph` is immutable after construction and safe to share across
threads. All distances are exact single-source Dijkstra results; there is no
approximation anywhere in this module.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from functools import cached_property
from heapq import heappop, heappush
from typing import Iterable, Sequence

from .errors import DisconnectedGraph, InvalidPartition, InvariantViolation, NoEdges

INF = math.inf

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with positive edge lengths and dense ids 0..n-1.

    Each unordered pair appears once, stored with u < v. Hosts produced by
    the embedder may carry zero-length edges; pass ``allow_zero=True`` for
    those, input graphs must keep strictly positive lengths.
    """

    n: int
    edges: tuple[Edge, ...]
    allow_zero: InitVar[bool] = False

    def __post_init__(self, allow_zero: bool):
        if self.n < 0:
            raise InvariantViolation("vertex count must be nonnegative")
        canon = []
        seen = set()
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvariantViolation(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise InvariantViolation(f"self-loop at vertex {u}")
            if w < 0 or (w == 0 and not allow_zero) or not math.isfinite(w):
                raise InvariantViolation(f"edge ({u},{v}) has nonpositive length {w}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise InvariantViolation(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            canon.append((u, v, float(w)))
        object.__setattr__(self, "edges", tuple(canon))

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    @cached_property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((u, v) for u, v, _ in self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_set

    @property
    def m(self) -> int:
        return len(self.edges)

    def total_length(self) -> float:
        return sum(w for _, _, w in self.edges)

    def min_edge_length(self) -> float:
        if not self.edges:
            raise NoEdges("graph has no edges")
        return min(w for _, _, w in self.edges)


@dataclass(frozen=True)
class UnweightedGraph:
    """Simple unweighted graph; distances are hop counts."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        canon = []
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise InvariantViolation(f"bad edge ({u},{v})")
            if u > v:
                u, v = v, u
            if (u, v) not in seen:
                seen.add((u, v))
                canon.append((u, v))
        object.__setattr__(self, "edges", tuple(canon))

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def bfs_distances(self, src: int, blocked: set[int] | None = None) -> list[float]:
        dist = [INF] * self.n
        if blocked and src in blocked:
            return dist
        dist[src] = 0.0
        queue = [src]
        adj = self.adjacency
        while queue:
            nxt = []
            for u in queue:
                for v in adj[u]:
                    if dist[v] == INF and (not blocked or v not in blocked):
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            queue = nxt
        return dist

    def hop_diameter(self) -> int:
        best = 0
        for s in range(self.n):
            dist = self.bfs_distances(s)
            worst = max(dist) if self.n else 0.0
            if worst == INF:
                raise DisconnectedGraph("hop diameter undefined on disconnected graph")
            best = max(best, int(worst))
        return best


def dijkstra(
    g: WeightedGraph,
    src: int,
    allowed: Sequence[bool] | None = None,
    limit: float | None = None,
) -> list[float]:
    """Exact single-source shortest-path distances; INF when unreachable.

    `allowed` restricts the search to the induced subgraph where it is True;
    `limit` prunes anything strictly farther than the limit (those entries
    stay INF).
    """
    if not 0 <= src < g.n:
        raise InvariantViolation(f"source {src} out of range")
    dist = [INF] * g.n
    dist[src] = 0.0
    heap = [(0.0, src)]
    adj = g.adjacency
    while heap:
        d, u = heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            if allowed is not None and not allowed[v]:
                continue
            nd = d + w
            if nd < dist[v] and (limit is None or nd <= limit):
                dist[v] = nd
                heappush(heap, (nd, v))
    return dist


def all_pairs(g: WeightedGraph) -> list[list[float]]:
    """Full distance matrix by repeated Dijkstra."""
    return [dijkstra(g, s) for s in range(g.n)]


def is_connected(g: WeightedGraph) -> bool:
    if g.n == 0:
        return True
    return len(component_of(g, 0)) == g.n


def component_of(
    g: WeightedGraph, start: int, removed_edges: set[tuple[int, int]] | None = None
) -> list[int]:
    seen = {start}
    stack = [start]
    adj = g.adjacency
    while stack:
        u = stack.pop()
        for v, _ in adj[u]:
            if removed_edges and (min(u, v), max(u, v)) in removed_edges:
                continue
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return sorted(seen)


def connected_components(
    g: WeightedGraph, removed_edges: set[tuple[int, int]] | None = None
) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by smallest vertex."""
    comps = []
    visited = [False] * g.n
    for s in range(g.n):
        if not visited[s]:
            comp = component_of(g, s, removed_edges)
            for v in comp:
                visited[v] = True
            comps.append(comp)
    return comps


def diameter(g: WeightedGraph, dist_matrix: list[list[float]] | None = None) -> float:
    """Largest pairwise distance; raises on disconnected input."""
    if g.n <= 1:
        return 0.0
    dm = dist_matrix if dist_matrix is not None else all_pairs(g)
    worst = 0.0
    for row in dm:
        m = max(row)
        if m == INF:
            raise DisconnectedGraph("diameter undefined on disconnected graph")
        worst = max(worst, m)
    return worst


def min_distance(g: WeightedGraph, dist_matrix: list[list[float]] | None = None) -> float:
    """Smallest distance between two distinct vertices."""
    if g.n < 2:
        raise InvariantViolation("need at least two vertices")
    dm = dist_matrix if dist_matrix is not None else all_pairs(g)
    best = INF
    for u in range(g.n):
        for v in range(u + 1, g.n):
            best = min(best, dm[u][v])
    return best


def stretch_exponent(g: WeightedGraph) -> int:
    """Least integer l such that (max distance / min distance) < 2**l."""
    if g.n < 2:
        raise DisconnectedGraph("stretch undefined with fewer than two vertices")
    dm = all_pairs(g)
    dmax = diameter(g, dm)
    dmin = min_distance(g, dm)
    stretch = dmax / dmin
    ell = 0
    while not stretch < 2.0**ell:
        ell += 1
    return ell


def hat_ell(g: WeightedGraph) -> int:
    """Least integer so that total edge length / min edge length < 2**result."""
    if not g.edges:
        raise NoEdges("hat_ell needs at least one edge")
    ratio = g.total_length() / g.min_edge_length()
    ell = 0
    while not ratio < 2.0**ell:
        ell += 1
    return ell


def normalize(g: WeightedGraph) -> tuple[WeightedGraph, float]:
    """Rescale so every pairwise distance exceeds one.

    Fixed rule: multiply all lengths by 2/min-distance when the minimum
    distance is <= 1, otherwise leave the graph untouched (scale 1). The
    scale is returned so host distances can be mapped back.
    """
    if not is_connected(g):
        raise DisconnectedGraph("normalize requires a connected graph")
    if g.n < 2:
        return g, 1.0
    dmin = min_distance(g)
    if dmin > 1.0:
        return g, 1.0
    scale = 2.0 / dmin
    scaled = WeightedGraph(g.n, tuple((u, v, w * scale) for u, v, w in g.edges))
    return scaled, scale


def metric_closure_weights(g: WeightedGraph) -> WeightedGraph:
    """Replace each edge length by the distance between its endpoints."""
    if not is_connected(g):
        raise DisconnectedGraph("metric closure requires a connected graph")
    dm = all_pairs(g)
    return WeightedGraph(g.n, tuple((u, v, dm[u][v]) for u, v, _ in g.edges))


def check_partition(n: int, parts: Sequence[Iterable[int]]) -> list[list[int]]:
    norm = [sorted(set(p)) for p in parts]
    seen: set[int] = set()
    for p in norm:
        if not p:
            raise InvalidPartition("empty part")
        for v in p:
            if not 0 <= v < n:
                raise InvalidPartition(f"vertex {v} out of range")
            if v in seen:
                raise InvalidPartition(f"vertex {v} appears in two parts")
            seen.add(v)
    if len(seen) != n:
        raise InvalidPartition("parts do not cover the vertex set")
    return norm


def quotient(g: WeightedGraph, parts: Sequence[Iterable[int]]) -> UnweightedGraph:
    """Unweighted graph on parts, adjacent when some edge crosses them."""
    norm = check_partition(g.n, parts)
    part_of = [0] * g.n
    for i, p in enumerate(norm):
        for v in p:
            part_of[v] = i
    qedges = set()
    for u, v, _ in g.edges:
        a, b = part_of[u], part_of[v]
        if a != b:
            qedges.add((min(a, b), max(a, b)))
    return UnweightedGraph(len(norm), tuple(sorted(qedges)))


def induced_subgraph(g: WeightedGraph, vertices: Sequence[int]) -> tuple[WeightedGraph, list[int]]:
    """Induced subgraph with dense local ids; returns (subgraph, local->global)."""
    verts = sorted(vertices)
    local = {v: i for i, v in enumerate(verts)}
    edges = []
    for u, v, w in g.edges:
        if u in local and v in local:
            edges.append((local[u], local[v], w))
    return WeightedGraph(len(verts), tuple(edges)), verts
