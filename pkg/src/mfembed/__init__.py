"""Low-treedepth metric embeddings of weighted graphs with evaluation tools."""

from .cutpack import (
    Cut,
    CutPacking,
    TreeDecomposition,
    build_cut_packing,
    centroid_bag,
    cut_edges,
    find_balanced_cut,
    heuristic_tree_decomposition,
    is_balanced,
)
from .embedder import derive_params, embed_top, split, subgraph_level
from .frt import frt_embed
from .generators import generate
from .graphio import load_graph, save_graph
from .graphs import (
    UnweightedGraph,
    WeightedGraph,
    all_pairs,
    diameter,
    dijkstra,
    hat_ell,
    metric_closure_weights,
    normalize,
    quotient,
    stretch_exponent,
)
from .harness import ExperimentConfig, emit, evaluate, run_experiment
from .hierarchy import ChainFailure, ClusteringChain, build_chain, edge_level, level_cut_counts
from .hosts import HostEmbedding, Params, load_embedding, save_embedding, treedepth_of
from .partition import Clustering, count_cut_edges, sample_exponential, single_level_partition

__version__ = "0.1.0"

__all__ = [
    "ChainFailure",
    "Clustering",
    "ClusteringChain",
    "Cut",
    "CutPacking",
    "ExperimentConfig",
    "HostEmbedding",
    "Params",
    "TreeDecomposition",
    "UnweightedGraph",
    "WeightedGraph",
    "all_pairs",
    "build_chain",
    "build_cut_packing",
    "centroid_bag",
    "count_cut_edges",
    "cut_edges",
    "derive_params",
    "diameter",
    "dijkstra",
    "edge_level",
    "embed_top",
    "emit",
    "evaluate",
    "find_balanced_cut",
    "frt_embed",
    "generate",
    "hat_ell",
    "heuristic_tree_decomposition",
    "is_balanced",
    "level_cut_counts",
    "load_embedding",
    "load_graph",
    "metric_closure_weights",
    "normalize",
    "quotient",
    "run_experiment",
    "sample_exponential",
    "save_embedding",
    "save_graph",
    "single_level_partition",
    "split",
    "stretch_exponent",
    "subgraph_level",
    "treedepth_of",
]
