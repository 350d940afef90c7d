"""Recursive embed/split pipeline producing low-treedepth host embeddings.

`embed_top` preprocesses (metric closure, rescaling, parameter derivation)
and then recursively splits the graph: build a clustering chain, pack
balanced cuts, sample one cut, carve its boundary edges, and recurse on the
components. Every member of the sampled cut contributes one portal; a copy
of each portal joins the host, wired to every vertex of the current
subgraph at its distance inside that subgraph, and the portal copies stack
on top of the sub-forests, which keeps the elimination forest valid.

If any chain build fails, all partial work is discarded and the whole graph
is embedded into a random HST instead (`fallback_used` is set).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .cutpack import Cut, build_cut_packing, cut_edges
from .errors import BadEpsilon, DisconnectedGraph, InvariantViolation, PreconditionViolation
from .frt import frt_embed
from .graphs import (
    WeightedGraph,
    all_pairs,
    diameter,
    dijkstra,
    hat_ell,
    induced_subgraph,
    is_connected,
    metric_closure_weights,
    normalize,
)
from .hierarchy import ChainFailure, ClusteringChain, build_chain, level_count_for_diameter
from .hosts import EmbeddingMeta, HostEmbedding, Params
from .rng import derive_seed

DEFAULT_C_FALLBACK = 64.0
DEFAULT_XI_CAP = 16


def derive_params(
    n: int,
    hat_ell_value: int,
    epsilon: float,
    mode: str = "practical",
    *,
    c_fallback: float = DEFAULT_C_FALLBACK,
    gamma: float = 1.0,
    xi_cap: int = DEFAULT_XI_CAP,
    tau_cap: int | None = None,
) -> Params:
    """Evaluate the split-parameter formulas for an n-vertex input.

    theory mode keeps the raw values; practical mode caps xi at xi_cap and
    tau at tau_cap (default 4*ceil(sqrt(n))).
    """
    if not 0 < epsilon < 1:
        raise BadEpsilon(f"epsilon must lie in (0,1), got {epsilon}")
    if n < 2 or hat_ell_value < 1:
        raise PreconditionViolation("need n >= 2 and hat_ell >= 1")
    if mode not in ("theory", "practical"):
        raise PreconditionViolation(f"unknown mode {mode!r}")
    log2n = (n - 1).bit_length()  # ceil(log2 n) for n >= 2
    ln_n = math.log(n)
    delta = epsilon / (c_fallback * hat_ell_value * n * ln_n * ln_n)
    if not 0 < delta < 1:
        raise BadEpsilon("derived delta leaves (0,1); increase c_fallback")
    lam = math.log(2.0 * hat_ell_value * n * n / delta) + 1.0
    xi_theory = math.ceil(64.0 * hat_ell_value**3 * log2n * lam / epsilon)
    sigma = 480.0 * lam * lam
    tau_theory = math.ceil((xi_theory + 1) * gamma * hat_ell_value**2 * sigma**2)
    if mode == "theory":
        xi, tau = xi_theory, tau_theory
    else:
        if tau_cap is None:
            tau_cap = 4 * math.ceil(math.sqrt(n))
        xi = min(xi_theory, xi_cap)
        tau = min(tau_theory, tau_cap)
    return Params(
        epsilon=epsilon,
        delta=delta,
        xi=xi,
        sigma=sigma,
        tau=tau,
        c_fallback=c_fallback,
        gamma=gamma,
        mode=mode,
        xi_cap=xi_cap if mode == "practical" else None,
        tau_cap=tau_cap if mode == "practical" else None,
    )


def subgraph_level(g: WeightedGraph) -> int:
    """The unique l with 2**(l-1) < diameter <= 2**l (distances above 1)."""
    if g.n < 2:
        raise PreconditionViolation("level undefined for a single vertex")
    d = diameter(g)
    if d <= 1.0:
        raise PreconditionViolation("level assumes all distances exceed 1")
    return level_count_for_diameter(d)


@dataclass
class SplitResult:
    cutedges: set[tuple[int, int]]
    portals: list[int]
    cut: Cut
    level: int
    chain: ClusteringChain
    packing_size: int
    oversize_in_packing: int


@dataclass
class SplitFailure:
    reason: ChainFailure


class _FallbackRequired(Exception):
    pass


def split(
    g: WeightedGraph,
    params: Params,
    rng: random.Random,
    *,
    literal_level0: bool = False,
    force_failure: bool = False,
) -> SplitResult | SplitFailure:
    """One split step on a connected subgraph with at least two vertices."""
    if g.n < 2:
        raise PreconditionViolation("split needs at least two vertices")
    if force_failure:
        return SplitFailure(ChainFailure(level=-1, reason="Injected", cluster_index=-1))
    chain_rng = random.Random(rng.getrandbits(64))
    chain = build_chain(g, params.delta, chain_rng, literal_level0=literal_level0)
    if isinstance(chain, ChainFailure):
        return SplitFailure(chain)
    packing = build_cut_packing(g, chain, params.xi, params.tau)
    cut = rng.choice(packing.cuts)
    portals = [chain.centers[lvl][chain.vertex_to_cluster[lvl][min(member)]]
               for member, lvl in zip(cut.members, cut.levels)]
    return SplitResult(
        cutedges=cut_edges(g, cut),
        portals=portals,
        cut=cut,
        level=chain.top_level,
        chain=chain,
        packing_size=len(packing.cuts),
        oversize_in_packing=sum(1 for c in packing.cuts if c.oversize),
    )


class _EmbedState:
    """Mutable host under construction during the recursion."""

    def __init__(self, graph, params, seed, *, global_distances, literal_level0, fail_split_index):
        self.graph = graph
        self.params = params
        self.seed = seed
        self.literal_level0 = literal_level0
        self.fail_split_index = fail_split_index
        self.global_dist = all_pairs(graph) if global_distances else None
        self.parent: list[int | None] = [None] * graph.n
        self.edges: list[tuple[int, int, float]] = []
        self.next_id = graph.n
        self.split_calls = 0
        self.packing_sizes: list[int] = []
        self.oversize_cuts = 0
        self.recursion_depth = 0

    def embed(self, vertices: list[int], path: tuple[int, ...], depth: int) -> list[int]:
        """Returns the forest roots of the fragment for `vertices`."""
        self.recursion_depth = max(self.recursion_depth, depth)
        if len(vertices) == 1:
            return [vertices[0]]
        sub, verts = induced_subgraph(self.graph, vertices)
        call_index = self.split_calls
        self.split_calls += 1
        rng = random.Random(derive_seed(self.seed, "split", *path))
        result = split(
            sub,
            self.params,
            rng,
            literal_level0=self.literal_level0,
            force_failure=call_index == self.fail_split_index,
        )
        if isinstance(result, SplitFailure):
            raise _FallbackRequired
        self.packing_sizes.append(result.packing_size)
        self.oversize_cuts += result.oversize_in_packing

        removed = {(verts[a], verts[b]) for a, b in result.cutedges}
        comps = connected_components_of(self.graph, vertices, removed)
        roots: list[int] = []
        for k, comp in enumerate(comps):
            self._check_progress(comp, result.level, len(vertices))
            roots.extend(self.embed(comp, path + (k,), depth + 1))
        for local_z in result.portals:
            if self.global_dist is not None:
                dist = [self.global_dist[verts[local_z]][verts[i]] for i in range(sub.n)]
            else:
                dist = dijkstra(sub, local_z)
            copy_id = self.next_id
            self.next_id += 1
            self.parent.append(None)
            for i, v in enumerate(verts):
                self.edges.append((copy_id, v, dist[i]))
            for r in roots:
                self.parent[r] = copy_id
            roots = [copy_id]
        return roots

    def _check_progress(self, comp, parent_level, parent_size):
        # Either half the vertices or a strictly smaller level.
        if 2 * len(comp) <= parent_size:
            return
        csub, _ = induced_subgraph(self.graph, comp)
        child_level = level_count_for_diameter(diameter(csub))
        if child_level >= parent_level:
            raise InvariantViolation(
                f"recursion made no progress: size {len(comp)}/{parent_size}, "
                f"level {child_level}/{parent_level}"
            )


def connected_components_of(
    g: WeightedGraph, vertices: list[int], removed: set[tuple[int, int]]
) -> list[list[int]]:
    """Components of the induced subgraph minus the removed edges."""
    inside = set(vertices)
    seen: set[int] = set()
    comps = []
    for s in vertices:
        if s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v, _ in g.adjacency[u]:
                if v in inside and v not in seen:
                    key = (min(u, v), max(u, v))
                    if key in removed:
                        continue
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def embed_top(
    g: WeightedGraph,
    epsilon: float,
    mode: str = "practical",
    seed: int = 0,
    *,
    c_fallback: float = DEFAULT_C_FALLBACK,
    gamma: float = 1.0,
    xi_cap: int = DEFAULT_XI_CAP,
    tau_cap: int | None = None,
    global_portal_distances: bool = False,
    literal_level0: bool = False,
    fail_split_index: int | None = None,
) -> HostEmbedding:
    """Embed a connected graph; on split failure fall back to the HST path.

    Host distances are reported in the input scale regardless of the
    internal rescaling.
    """
    if not is_connected(g):
        raise DisconnectedGraph("embed components separately")
    if g.n == 0:
        raise DisconnectedGraph("cannot embed the empty graph")
    if g.n == 1:
        return HostEmbedding(
            host=WeightedGraph(1, ()),
            eta=[0],
            forest=[None],
            meta=EmbeddingMeta(
                n=1, seed=seed, mode=mode, params=None, fallback_used=False, recursion_depth=1
            ),
        )
    closed = metric_closure_weights(g)
    scaled, scale = normalize(closed)
    hat = hat_ell(scaled)
    params = derive_params(
        g.n,
        hat,
        epsilon,
        mode,
        c_fallback=c_fallback,
        gamma=gamma,
        xi_cap=xi_cap,
        tau_cap=tau_cap,
    )
    state = _EmbedState(
        scaled,
        params,
        seed,
        global_distances=global_portal_distances,
        literal_level0=literal_level0,
        fail_split_index=fail_split_index,
    )
    try:
        roots = state.embed(list(range(g.n)), (), 1)
    except _FallbackRequired:
        emb = frt_embed(g, derive_seed(seed, "frt"))
        emb.meta = EmbeddingMeta(
            n=g.n,
            seed=seed,
            mode=mode,
            params=params,
            fallback_used=True,
            hat_ell=hat,
            recursion_depth=state.recursion_depth,
            split_calls=state.split_calls,
        )
        return emb
    for r in roots:
        state.parent[r] = None
    if scale != 1.0:
        host_edges = tuple((u, v, w / scale) for u, v, w in state.edges)
    else:
        host_edges = tuple(state.edges)
    host = WeightedGraph(state.next_id, host_edges, allow_zero=True)
    meta = EmbeddingMeta(
        n=g.n,
        seed=seed,
        mode=mode,
        params=params,
        fallback_used=False,
        scale=scale,
        hat_ell=hat,
        packing_sizes=state.packing_sizes,
        oversize_cuts=state.oversize_cuts,
        recursion_depth=state.recursion_depth,
        split_calls=state.split_calls,
    )
    return HostEmbedding(host=host, eta=list(range(g.n)), forest=state.parent, meta=meta)
