"""From an in-tree (or spanning tree) to clusters.

Edges ranked by length form the edge plot; cutting the k longest edges
of an in-tree leaves k+1 components, and every node takes the root it
reaches in the cut forest as its cluster label.  Evaluation against
ground truth assigns each cluster to its best class (a class may absorb
several clusters) and counts the points left unexplained.
"""

import numpy as np

from .errors import UsageError
from .metrics import PairwiseDistances

__all__ = ["EdgePlot", "ClusterLabeling", "edge_plot", "edge_plot_from_tree",
           "mst_to_forest", "cut_and_assign", "mst_cut", "error_rate",
           "saliency_gap"]


class EdgePlot:
    """Parent edges sorted by length descending, ties by lower child index."""

    def __init__(self, child, parent, length):
        self.child = np.asarray(child, dtype=np.int64)
        self.parent = np.asarray(parent, dtype=np.int64)
        self.length = np.asarray(length, dtype=np.float64)
        order = np.lexsort((self.child, -self.length))
        self.child = self.child[order]
        self.parent = self.parent[order]
        self.length = self.length[order]

    def __len__(self):
        return len(self.child)

    def top(self, k):
        return self.length[:k]


class ClusterLabeling:
    """Cluster ids per node; ids are the post-cut root indices."""

    def __init__(self, labels):
        self.labels = np.asarray(labels, dtype=np.int64)
        self.c = len(np.unique(self.labels))

    @property
    def n(self):
        return len(self.labels)

    def sizes(self):
        return np.sort(np.bincount(self.labels,
                                   minlength=0)[np.unique(self.labels)])[::-1]


def edge_plot(forest, ds, metric, dists=None):
    """Ranked lengths of every parent edge (root self-loops excluded)."""
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    child, parent = forest.edges()
    length = np.array([dists.row(int(c))[int(p)]
                       for c, p in zip(child, parent)], dtype=np.float64)
    return EdgePlot(child, parent, length)


def mst_to_forest(tree):
    """Orient a spanning tree into child/parent form rooted at node 0."""
    from .descent import ParentForest
    adj = [[] for _ in range(tree.n)]
    for u, v, _ in tree.edges:
        adj[u].append(v)
        adj[v].append(u)
    parent = np.arange(tree.n)
    seen = np.zeros(tree.n, dtype=bool)
    stack = [0]
    seen[0] = True
    while stack:
        u = stack.pop()
        for v in sorted(adj[u]):
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                stack.append(v)
    return ParentForest(parent, "merged")


def edge_plot_from_tree(tree, ds, metric, dists=None):
    """Edge plot of a spanning tree (same lengths as the tree's edges)."""
    return edge_plot(mst_to_forest(tree), ds, metric, dists=dists)


def _root_labels(parent):
    """Label every node with the root its parent chain reaches (memoized)."""
    n = len(parent)
    labels = np.full(n, -1, dtype=np.int64)
    for i in range(n):
        path = []
        j = i
        while labels[j] < 0 and parent[j] != j:
            path.append(j)
            j = int(parent[j])
        root = labels[j] if labels[j] >= 0 else j
        labels[path] = root
        labels[j] = root
    return labels


def cut_and_assign(forest, plot, count=None, threshold=None):
    """Remove edges from the in-tree and label nodes by their root.

    Either the ``count`` longest edges are cut (plot order, so ties go
    to the lower child index) or every edge strictly longer than
    ``threshold``.  Cutting k edges of an in-tree yields k+1 clusters.
    """
    if (count is None) == (threshold is None):
        raise UsageError("give exactly one of count= or threshold=")
    n = forest.n
    if count is not None:
        if not 0 <= count <= n - 1:
            raise UsageError(f"cut count {count} out of range [0, {n - 1}]")
        cut_children = plot.child[:count]
    else:
        if threshold < 0:
            raise UsageError("cut threshold must be nonnegative")
        cut_children = plot.child[plot.length > threshold]
    parent = forest.parent.copy()
    parent[cut_children] = cut_children
    return ClusterLabeling(_root_labels(parent))


def mst_cut(tree, count):
    """Remove the k longest spanning-tree edges (ties by lower index
    pair); connected components become clusters labeled by their lowest
    member index."""
    if not 0 <= count <= max(tree.n - 1, 0):
        raise UsageError(f"cut count {count} out of range [0, {tree.n - 1}]")
    edges = sorted(tree.edges, key=lambda e: (-e[2], e[0], e[1]))
    keep = edges[count:]
    parent = np.arange(tree.n)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = int(parent[x])
        return x

    for u, v, _ in keep:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    return ClusterLabeling(np.array([find(i) for i in range(tree.n)]))


def error_rate(labeling, truth):
    """Misassignment count against ground-truth classes.

    Each predicted cluster is assigned to the class holding most of its
    points (several clusters may map to one class, matching how pure
    over-segmented clusterings score zero); errors are everything not
    explained, and relabeling either side changes nothing.
    """
    labels = labeling.labels if isinstance(labeling, ClusterLabeling) \
        else np.asarray(labeling)
    if truth is None:
        raise UsageError("ground-truth labels required for error rate")
    truth = np.asarray(truth, dtype=object)
    if len(truth) != len(labels):
        raise UsageError("truth and labels have different lengths")
    n = len(labels)
    matched = 0
    for lab in np.unique(labels):
        members = truth[labels == lab]
        _, counts = np.unique(members.astype(str), return_counts=True)
        matched += int(counts.max())
    errors = n - matched
    c = len(np.unique(labels))
    return errors, errors / n, c


def saliency_gap(plot, count):
    """(mean of the k largest lengths) / (length at rank k+1); large
    values mean the candidate redundant edges stand clear of the rest."""
    if not 1 <= count < len(plot):
        raise UsageError(f"rank {count} out of range [1, {len(plot) - 1}]")
    top = plot.length[:count].mean()
    nxt = plot.length[count]
    if nxt == 0.0:
        return float("inf")
    return float(top / nxt)
