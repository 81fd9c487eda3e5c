"""Neighborhood structures constraining the descent: k-NN graph, 2-D
Delaunay triangulation, minimum spanning tree, or the complete graph.

All tie-breaking is by node index, never by arrival order, so every
builder is deterministic under any internal computation order.
"""

import os

import numpy as np
from scipy.spatial import cKDTree

from . import delaunay as _delaunay
from .errors import ParseError, UsageError
from .metrics import PairwiseDistances, check_metric

__all__ = ["NeighborGraph", "WeightedTreeEdges", "knn_graph", "delaunay_2d",
           "mst", "mst_graph", "complete_graph", "save_graph",
           "load_edge_graph"]

# brute-force k-NN below this size; kd-tree above (euclidean only)
BRUTE_FORCE_MAX = 4096


class NeighborGraph:
    """Per-node neighbor index sets in CSR form (each set sorted ascending)."""

    def __init__(self, indptr, indices, source, k=None):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.source = source
        self.k = k

    @property
    def n(self):
        return len(self.indptr) - 1

    def neighbors(self, i):
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def counts(self):
        return np.diff(self.indptr)

    def is_complete(self):
        return bool(np.all(self.counts() == self.n - 1))

    def degree_symmetric(self):
        pairs = set()
        for i in range(self.n):
            for j in self.neighbors(i):
                pairs.add((i, int(j)))
        return all((j, i) in pairs for i, j in pairs)

    def validate(self):
        n = self.n
        assert self.indptr[0] == 0 and self.indptr[-1] == len(self.indices)
        for i in range(n):
            nb = self.neighbors(i)
            assert np.all((nb >= 0) & (nb < n)), "neighbor index out of range"
            assert i not in nb, f"node {i} is its own neighbor"
            assert np.all(np.diff(nb) > 0), "neighbor set not sorted/unique"


class WeightedTreeEdges:
    """Spanning-tree edge list: (u, v, length) with u < v, N-1 edges."""

    def __init__(self, n, edges):
        self.n = n
        self.edges = [(int(min(u, v)), int(max(u, v)), float(w))
                      for u, v, w in edges]

    def validate(self):
        assert len(self.edges) == self.n - 1, "spanning tree needs N-1 edges"
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.edges:
            ru, rv = find(u), find(v)
            assert ru != rv, "cycle in spanning tree"
            parent[rv] = ru
        assert len({find(i) for i in range(self.n)}) == 1, "tree not connected"


def _csr_from_lists(sets):
    indptr = np.zeros(len(sets) + 1, dtype=np.int64)
    for i, s in enumerate(sets):
        indptr[i + 1] = indptr[i] + len(s)
    indices = np.empty(indptr[-1], dtype=np.int64)
    for i, s in enumerate(sets):
        indices[indptr[i]:indptr[i + 1]] = s
    return indptr, indices


def _all_others(n):
    sets = []
    base = np.arange(n)
    for i in range(n):
        sets.append(np.concatenate([base[:i], base[i + 1:]]))
    return _csr_from_lists(sets)


def complete_graph(n):
    indptr, indices = _all_others(n)
    return NeighborGraph(indptr, indices, "complete")


def _knn_brute(dists, n, k):
    ids = np.arange(n)
    sets = []
    for i in range(n):
        d = dists.row(i).copy()
        d[i] = np.inf
        order = np.lexsort((ids, d))[:k]
        sets.append(np.sort(order))
    return sets


def _knn_kdtree(points, dists, n, k):
    # query k+1 (self included), then take every point within the k-th
    # other-neighbor distance and re-rank with the canonical row-kernel
    # distances so ties resolve exactly as in the brute-force path
    tree = cKDTree(points)
    kd_d, _ = tree.query(points, k=k + 1)
    radii = kd_d[:, -1] * (1.0 + 1e-9) + 1e-300
    balls = tree.query_ball_point(points, radii)
    sets = []
    for i in range(n):
        cand = np.asarray(sorted(balls[i]), dtype=np.int64)
        if len(cand) < k + 1:
            cand = np.arange(n)
        x = points[i]
        d = np.sqrt(((points[cand] - x) ** 2).sum(axis=1))
        d[cand == i] = np.inf
        order = np.lexsort((cand, d))[:k]
        sets.append(np.sort(cand[order]))
    return sets


def knn_graph(ds, metric, k, symmetrize=False, dists=None, force=None):
    """k nearest neighbors of every node, distance ties broken by lower
    index.  Directed by default; ``symmetrize`` takes the union closure.

    ``force`` ("brute" or "kdtree") pins the search path; by default the
    kd-tree is used for euclidean data above BRUTE_FORCE_MAX points.
    Both paths produce identical neighbor sets.
    """
    check_metric(ds.kind, metric)
    n = ds.n
    if not 1 <= k <= n - 1:
        raise UsageError(f"K={k} out of range [1, {n - 1}]")
    if k == n - 1:
        indptr, indices = _all_others(n)
        return NeighborGraph(indptr, indices, "knn", k=k)
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    use_tree = (metric == "euclidean" and n > BRUTE_FORCE_MAX)
    if force == "brute":
        use_tree = False
    elif force == "kdtree":
        if metric != "euclidean":
            raise UsageError("kd-tree search requires the euclidean metric")
        use_tree = True
    if use_tree:
        sets = _knn_kdtree(ds.points, dists, n, k)
    else:
        sets = _knn_brute(dists, n, k)
    if symmetrize:
        closure = [set(s.tolist()) for s in sets]
        for i, s in enumerate(sets):
            for j in s:
                closure[int(j)].add(i)
        sets = [np.array(sorted(s), dtype=np.int64) for s in closure]
    indptr, indices = _csr_from_lists(sets)
    return NeighborGraph(indptr, indices, "knn", k=k)


def delaunay_2d(ds):
    """Neighbor graph from the Delaunay triangulation of 2-D points.

    Exactly coincident points are collapsed before triangulating; the
    copies become mutual neighbors and share their representative's
    adjacency.
    """
    if ds.kind != "numeric" or ds.d != 2:
        raise UsageError("Delaunay triangulation requires numeric 2-D data")
    if ds.n < 3:
        raise UsageError("Delaunay triangulation requires at least 3 points")
    uniq, rep_of = np.unique(ds.points, axis=0, return_inverse=True)
    m = len(uniq)
    if m < 3:
        raise UsageError("fewer than 3 distinct points; triangulation undefined")
    owners = [[] for _ in range(m)]
    for i in range(ds.n):
        owners[rep_of[i]].append(i)
    first_owner = np.array([o[0] for o in owners])
    edges = _delaunay.triangulate_edges(uniq, ids=first_owner)
    adj = [set() for _ in range(m)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    sets = []
    for i in range(ds.n):
        r = rep_of[i]
        nb = set()
        for s in adj[r]:
            nb.update(owners[s])
        nb.update(owners[r])
        nb.discard(i)
        sets.append(np.array(sorted(nb), dtype=np.int64))
    indptr, indices = _csr_from_lists(sets)
    return NeighborGraph(indptr, indices, "delaunay")


def mst(ds, metric, dists=None):
    """Minimum spanning tree under the metric (Prim; equal-length
    frontier edges resolved by the lower (tree node, outside node) pair)."""
    check_metric(ds.kind, metric)
    n = ds.n
    if n == 1:
        return WeightedTreeEdges(1, [])
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    intree = np.zeros(n, dtype=bool)
    intree[0] = True
    key = dists.row(0).copy()
    link = np.zeros(n, dtype=np.int64)
    key[0] = np.inf
    edges = []
    for _ in range(n - 1):
        outside = np.flatnonzero(~intree)
        kmin = key[outside].min()
        tie = outside[key[outside] == kmin]
        lmin = link[tie].min()
        v = int(tie[link[tie] == lmin].min())
        u = int(link[v])
        edges.append((u, v, float(key[v])))
        intree[v] = True
        key[v] = np.inf
        dv = dists.row(v)
        upd = ~intree & ((dv < key) | ((dv == key) & (v < link)))
        key[upd] = dv[upd]
        link[upd] = v
    return WeightedTreeEdges(n, edges)


def mst_graph(tree):
    """The spanning tree as a symmetric NeighborGraph (Step-1 constraint)."""
    sets = [set() for _ in range(tree.n)]
    for u, v, _ in tree.edges:
        sets[u].add(v)
        sets[v].add(u)
    indptr, indices = _csr_from_lists(
        [np.array(sorted(s), dtype=np.int64) for s in sets])
    return NeighborGraph(indptr, indices, "mst")


def save_graph(g, target, dists=None):
    """Write the adjacency as 'u v length' lines (each stored arc once)."""
    lines = []
    for i in range(g.n):
        for j in g.neighbors(i):
            w = float(dists.row(i)[j]) if dists is not None else 0.0
            lines.append(f"{i} {int(j)} {w!r}")
    text = "\n".join(lines) + ("\n" if lines else "")
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(os.fspath(target), "w", encoding="utf-8") as fh:
            fh.write(text)


def load_edge_graph(source, n):
    """Read an undirected edge list ('u v [length]' per line) as a
    NeighborGraph; lengths in the file are ignored (distances always
    come from the dataset)."""
    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(os.fspath(source), "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    sets = [set() for _ in range(n)]
    for r, line in enumerate(lines):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) < 2:
            raise ParseError(f"edge line {r}: expected 'u v [length]'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"edge line {r}: non-integer endpoint") from None
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParseError(f"edge line {r}: bad endpoints {u} {v}")
        sets[u].add(v)
        sets[v].add(u)
    indptr, indices = _csr_from_lists(
        [np.array(sorted(s), dtype=np.int64) for s in sets])
    return NeighborGraph(indptr, indices, "edges")
