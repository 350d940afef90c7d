import itertools
import random

from oracles import (
    all_connected_labeled_graphs,
    balanced_predicate,
    enumerate_balanced_chain_cuts,
    exact_treewidth,
)

from mfembed.cutpack import (
    Cut,
    CutPacking,
    build_cut_packing,
    centroid_bag,
    cut_edges,
    cuts_conflict,
    find_balanced_cut,
    heuristic_tree_decomposition,
    is_balanced,
    maximal_free_clusters,
    validate_tree_decomposition,
)
from mfembed.generators import generate
from mfembed.graphs import UnweightedGraph, WeightedGraph
from mfembed.hierarchy import ClusteringChain, build_chain


def scaled(g, factor=2.0):
    return WeightedGraph(g.n, tuple((u, v, factor * w) for u, v, w in g.edges))


def chain_of(g, delta=0.1, seed=0):
    result = build_chain(g, delta, random.Random(seed))
    assert isinstance(result, ClusteringChain)
    return result


def star_chain():
    """Hand-built chain for a 6-leaf star whose center sits in a
    non-singleton level-1 cluster; exercises the used/free marking."""
    g = WeightedGraph(7, tuple((0, i, 1.5) for i in range(1, 7)))
    levels = (
        tuple(frozenset({v}) for v in range(7)),
        (frozenset({0, 1, 2}), frozenset({3}), frozenset({4}), frozenset({5}), frozenset({6})),
        (frozenset(range(7)),),
    )
    vtc = (tuple(range(7)), (0, 0, 0, 1, 2, 3, 4), (0,) * 7)
    return g, ClusteringChain(
        graph=g,
        top_level=2,
        delta=0.1,
        sigma=50.0,
        r_schedule=(0.05, 0.1),
        levels=levels,
        centers=(tuple(range(7)), (0, 3, 4, 5, 6), (0,)),
        vertex_to_cluster=vtc,
        parents=((0, 0, 0, 1, 2, 3, 4), (0, 0, 0, 0, 0)),
    )


# ------------------------------------------------------------------ cut edges


def test_cut_edges_whole_vertex_set():
    g = generate("path", size=4)
    cut = Cut(members=(frozenset(range(4)),), levels=(2,))
    assert cut_edges(g, cut) == set()


def test_cut_edges_middle_vertex():
    g = generate("path", size=4)
    cut = Cut(members=(frozenset({1}),), levels=(0,))
    assert cut_edges(g, cut) == {(0, 1), (1, 2)}


def test_cut_edges_empty_cut():
    g = generate("path", size=4)
    assert cut_edges(g, Cut(members=(), levels=())) == set()


def test_cut_edges_between_two_members():
    g = generate("path", size=4)
    cut = Cut(members=(frozenset({0, 1}), frozenset({2, 3})), levels=(1, 1))
    assert cut_edges(g, cut) == {(1, 2)}


# --------------------------------------------------------- tree decomposition


def test_td_tree_input_width_one():
    # a small tree: star plus a pendant path
    h = UnweightedGraph(6, ((0, 1), (0, 2), (0, 3), (3, 4), (4, 5)))
    td = heuristic_tree_decomposition(h)
    validate_tree_decomposition(td)
    assert td.width == 1


def test_td_k4_width_three():
    h = UnweightedGraph(4, tuple(itertools.combinations(range(4), 2)))
    td = heuristic_tree_decomposition(h)
    validate_tree_decomposition(td)
    assert td.width == 3


def test_td_four_cycle_width_two():
    h = UnweightedGraph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
    td = heuristic_tree_decomposition(h)
    validate_tree_decomposition(td)
    assert td.width == 2 == exact_treewidth(h)


def test_td_single_vertex():
    td = heuristic_tree_decomposition(UnweightedGraph(1, ()))
    assert td.bags == (frozenset({0}),) and td.tree_edges == ()


def test_td_width_close_to_exact_exhaustive_small():
    for n in range(2, 6):
        for edges in all_connected_labeled_graphs(n):
            h = UnweightedGraph(n, tuple(edges))
            td = heuristic_tree_decomposition(h)
            validate_tree_decomposition(td)
            assert td.width <= exact_treewidth(h) + 2


def test_td_width_close_to_exact_sampled():
    rng = random.Random(0)
    for n in (6, 7, 8):
        pairs = list(itertools.combinations(range(n), 2))
        done = 0
        while done < 60:
            edges = rng.sample(pairs, rng.randint(n - 1, len(pairs)))
            try:
                h = UnweightedGraph(n, tuple(edges))
                if h.bfs_distances(0).count(float("inf")):
                    continue
            except Exception:
                continue
            done += 1
            td = heuristic_tree_decomposition(h)
            validate_tree_decomposition(td)
            assert td.width <= exact_treewidth(h) + 2


# ---------------------------------------------------------------- centroid bag


def test_centroid_single_node():
    td = heuristic_tree_decomposition(UnweightedGraph(1, ()))
    assert centroid_bag(td, [1.0]) == 0


def brute_force_centroids(td, weights):
    h = td.graph
    total = sum(weights)
    good = []
    for k in range(td.node_count()):
        blocked = set(td.bags[k])
        comp_ok = True
        seen = set(blocked)
        for s in range(h.n):
            if s in seen:
                continue
            stack, comp = [s], []
            seen.add(s)
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in h.adjacency[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            if 2 * sum(weights[u] for u in comp) > total:
                comp_ok = False
        if comp_ok:
            good.append(k)
    return good


def test_centroid_path_matches_brute_force():
    h = UnweightedGraph(5, ((0, 1), (1, 2), (2, 3), (3, 4)))
    td = heuristic_tree_decomposition(h)
    weights = [1.0] * 5
    good = brute_force_centroids(td, weights)
    chosen = centroid_bag(td, weights)
    assert chosen in good and chosen == min(good)
    assert 2 in td.bags[chosen]  # the middle vertex must be in a qualifying bag


def test_centroid_star_bags_contain_center():
    h = UnweightedGraph(6, tuple((0, i) for i in range(1, 6)))
    td = heuristic_tree_decomposition(h)
    weights = [1.0] * 6
    good = brute_force_centroids(td, weights)
    for k in good:
        assert 0 in td.bags[k] or all(2 * w <= 6 for w in weights)
    assert centroid_bag(td, weights) in good


# ------------------------------------------------------------- balanced cuts


def test_first_cut_is_whole_vertex_set():
    g = scaled(generate("path", size=4))
    chain = chain_of(g)
    cut = find_balanced_cut(g, chain, CutPacking(), tau=8)
    assert cut.members == (frozenset(range(4)),)
    assert is_balanced(g, cut)


def test_path_cut_brute_force_membership():
    g = scaled(generate("path", size=4))
    chain = chain_of(g)
    packing = CutPacking()
    packing.add(find_balanced_cut(g, chain, packing, tau=8))
    cut = find_balanced_cut(g, chain, packing, tau=8)
    legal = enumerate_balanced_chain_cuts(g, chain)
    assert cut.family() in legal
    assert balanced_predicate(g, list(cut.members))


def test_star_unique_single_cluster_balanced_cut():
    g = scaled(generate("star", size=6))
    chain = chain_of(g)
    singles = [fam for fam in enumerate_balanced_chain_cuts(g, chain) if len(fam) == 1]
    # every single-member balanced cut is the center's cluster or everything
    for fam in singles:
        (member,) = fam
        assert member == frozenset(range(g.n)) or member == frozenset({0})


def test_used_marking_descends_to_singletons():
    g, chain = star_chain()
    packing = CutPacking()
    first = find_balanced_cut(g, chain, packing, tau=8)
    assert first.members == (frozenset(range(7)),)
    packing.add(first)

    second = find_balanced_cut(g, chain, packing, tau=8)
    assert frozenset({0, 1, 2}) in second.family()
    packing.add(second)

    # the center's non-singleton cluster is used now; it may only come back
    # as a singleton
    third = find_balanced_cut(g, chain, packing, tau=8)
    for member in third.members:
        if 0 in member:
            assert member == frozenset({0})
    assert not cuts_conflict(third, second) and not cuts_conflict(third, first)
    parts = maximal_free_clusters(chain, packing)
    assert all(len(chain.cluster(i, j)) == 1 for i, j in parts)


def test_oversize_flag():
    g, chain = star_chain()
    packing = CutPacking()
    packing.add(find_balanced_cut(g, chain, packing, tau=8))
    cut = find_balanced_cut(g, chain, packing, tau=1)
    assert cut.oversize and len(cut) > 1


# ----------------------------------------------------------------- packing


def test_two_vertex_packing():
    g = WeightedGraph(2, ((0, 1, 1.5),))
    chain = chain_of(g)
    packing = build_cut_packing(g, chain, xi=1, tau=4)
    assert len(packing.cuts) >= 1
    for cut in packing.cuts:
        assert cut.family() != frozenset({frozenset({0, 1})})
        for member in cut.members:
            assert len(member) == 1
        assert is_balanced(g, cut)


def test_packing_cuts_all_balanced_and_nonconflicting():
    instances = [
        scaled(generate("grid", rows=4, cols=4)),
        scaled(generate("cycle", size=10)),
        scaled(generate("star", size=7)),
    ]
    for g in instances:
        chain = chain_of(g, delta=0.15, seed=3)
        packing = build_cut_packing(g, chain, xi=6, tau=3 * g.n)
        chain_sets = {c for level in chain.levels for c in level}
        for cut in packing.cuts:
            assert is_balanced(g, cut)
            assert balanced_predicate(g, list(cut.members))
            for member in cut.members:
                assert member in chain_sets
        for a, b in itertools.combinations(packing.cuts, 2):
            assert not cuts_conflict(a, b)


def test_packing_respects_xi_budget():
    g = scaled(generate("grid", rows=4, cols=4))
    chain = chain_of(g, delta=0.15, seed=1)
    small = build_cut_packing(g, chain, xi=2, tau=64)
    assert len(small.cuts) <= 2
    big = build_cut_packing(g, chain, xi=12, tau=64)
    assert len(big.cuts) >= len(small.cuts)


def test_small_graph_cut_membership_in_enumeration():
    # graphs up to n=10 with short chains: the produced cuts must appear in
    # the brute-force enumeration of balanced chain-respecting cuts
    rng = random.Random(5)
    instances = [
        scaled(generate("path", size=6)),
        scaled(generate("cycle", size=8)),
        scaled(generate("star", size=9)),
        scaled(generate("grid", rows=2, cols=5)),
    ]
    for g in instances:
        chain = chain_of(g, delta=0.2, seed=rng.randint(0, 100))
        legal = enumerate_balanced_chain_cuts(g, chain)
        packing = CutPacking()
        for _ in range(4):
            cut = find_balanced_cut(g, chain, packing, tau=32)
            assert cut.family() in legal
            if cut.family() in {c.family() for c in packing.cuts}:
                break
            packing.add(cut)
