"""Clustering by nearest-descent in-trees.

Pipeline: neighborhood graph -> per-node potential -> descent passes
producing a parent-pointer in-tree -> rank edge lengths -> cut the
longest edges -> propagate root labels -> evaluate against ground truth.
"""

from .clustering import (ClusterLabeling, EdgePlot, cut_and_assign, edge_plot,
                         edge_plot_from_tree, error_rate, mst_cut,
                         mst_to_forest, saliency_gap)
from .dataset import (Dataset, from_text, load_categorical, load_numeric,
                      minmax_normalize, save_delimited)
from .descent import (ParentForest, hnnd, merge_roots, nd_candidates, nd_full,
                      nd_pass, nnd_candidates, nnd_pass)
from .errors import ParseError, UsageError
from .metrics import METRICS, PairwiseDistances, distance, row_distances
from .neighbors import (NeighborGraph, WeightedTreeEdges, complete_graph,
                        delaunay_2d, knn_graph, load_edge_graph, mst,
                        mst_graph, save_graph)
from .potential import PotentialField, kernel_potential, local_potential
from .render import scatter_svg

__version__ = "0.1.0"

__all__ = [
    "ClusterLabeling", "EdgePlot", "cut_and_assign", "edge_plot",
    "edge_plot_from_tree", "error_rate", "mst_cut", "mst_to_forest",
    "saliency_gap", "Dataset", "from_text", "load_categorical",
    "load_numeric", "minmax_normalize", "save_delimited", "ParentForest",
    "hnnd", "merge_roots", "nd_candidates", "nd_full", "nd_pass",
    "nnd_candidates", "nnd_pass", "ParseError", "UsageError", "METRICS",
    "PairwiseDistances", "distance", "row_distances", "NeighborGraph",
    "WeightedTreeEdges", "complete_graph", "delaunay_2d", "knn_graph",
    "load_edge_graph", "mst", "mst_graph", "save_graph", "PotentialField",
    "kernel_potential", "local_potential", "scatter_svg",
]
