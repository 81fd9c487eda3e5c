"""The descent passes that build parent-pointer in-trees.

A node's admissible parent candidates are the nodes of strictly lower
potential, extended by the equal-potential rule "same potential and
lower index" so duplicate points can never deadlock.  Among candidates
the parent is the nearest one, distance ties to the lowest index; both
rules together make every pass a deterministic function of its inputs.

The neighborhood-constrained pass leaves one root per local potential
minimum; the merge pass reruns the unconstrained rule on those roots
only, producing a single in-tree.
"""

import numpy as np

from .errors import UsageError
from .metrics import PairwiseDistances

__all__ = ["ParentForest", "nnd_candidates", "nd_candidates", "nnd_pass",
           "nd_pass", "merge_roots", "hnnd", "nd_full"]

_BLOCK = 512


class ParentForest:
    """Parent pointers over all nodes; parent[i] == i marks a root.

    stage is "nnd-only" (one root per neighborhood-local minimum) or
    "merged" (exactly one root; an in-tree with N-1 edges).
    """

    def __init__(self, parent, stage):
        self.parent = np.asarray(parent, dtype=np.int64)
        self.stage = stage
        self.roots = np.flatnonzero(self.parent == np.arange(len(self.parent)))
        self.parent.setflags(write=False)

    @property
    def n(self):
        return len(self.parent)

    def edges(self):
        """(child, parent) pairs excluding root self-loops."""
        child = np.flatnonzero(self.parent != np.arange(self.n))
        return child, self.parent[child]

    def validate(self):
        n = self.n
        assert np.all((self.parent >= 0) & (self.parent < n))
        if self.stage == "merged":
            assert len(self.roots) == 1, "merged forest must have one root"
        # parent chains must terminate without revisiting a node
        for i in range(n):
            seen = 0
            j = i
            while self.parent[j] != j:
                j = int(self.parent[j])
                seen += 1
                assert seen <= n, f"cycle reached from node {i}"


def _admissible(potential, i, js):
    p = potential[i]
    return (potential[js] < p) | ((potential[js] == p) & (js < i))


def nnd_candidates(graph, field):
    """Per-node admissible parent sets restricted to the neighborhood
    (exposed for testing)."""
    p = field.values
    return [graph.neighbors(i)[_admissible(p, i, graph.neighbors(i))]
            for i in range(graph.n)]


def nd_candidates(subset, field):
    """Per-node admissible parent sets within an index subset."""
    subset = np.asarray(sorted({int(i) for i in subset}), dtype=np.int64)
    p = field.values
    return {int(i): subset[_admissible(p, i, subset) & (subset != i)]
            for i in subset}


def _nearest(cand, drow):
    # candidates are sorted ascending, argmin takes the first minimum,
    # so distance ties land on the lowest index
    return int(cand[np.argmin(drow[cand])])


def _full_pass_parents(subset, potential, dists):
    """Vectorized descent over a subset with no neighborhood constraint.

    Returns parents aligned with the (sorted) subset; the potential-
    lexicographic minimum keeps itself as parent.
    """
    s = len(subset)
    p = potential[subset]
    parents = np.empty(s, dtype=np.int64)
    for start in range(0, s, _BLOCK):
        rows = np.arange(start, min(start + _BLOCK, s))
        d = dists.rows(subset[rows])[:, subset]
        admissible = (p[None, :] < p[rows, None]) | (
            (p[None, :] == p[rows, None])
            & (subset[None, :] < subset[rows, None]))
        d = np.where(admissible, d, np.inf)
        best = np.argmin(d, axis=1)
        has = admissible.any(axis=1)
        parents[rows] = np.where(has, subset[best], subset[rows])
    return parents


def nnd_pass(graph, field, ds, metric, dists=None, _force_loop=False):
    """Neighborhood-constrained descent: each node points to its nearest
    admissible neighbor; nodes with no admissible neighbor become roots."""
    n = ds.n
    if graph.n != n or field.n != n:
        raise UsageError("graph, potential and dataset sizes differ")
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    p = field.values
    if graph.is_complete() and not _force_loop:
        parent = _full_pass_parents(np.arange(n), p, dists)
        return ParentForest(parent, "nnd-only")
    parent = np.arange(n)
    for i in range(n):
        nb = graph.neighbors(i)
        cand = nb[_admissible(p, i, nb)]
        if cand.size:
            parent[i] = _nearest(cand, dists.row(i))
    return ParentForest(parent, "nnd-only")


def nd_pass(subset, field, ds, metric, dists=None):
    """Unconstrained descent over an index subset.

    Returns parents aligned with the sorted subset; exactly one node
    (minimum potential, ties to the lowest index) keeps itself.
    """
    subset = np.asarray(sorted({int(i) for i in subset}), dtype=np.int64)
    if len(subset) == 0:
        raise UsageError("descent subset must be nonempty")
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    parents = _full_pass_parents(subset, field.values, dists)
    assert int((parents == subset).sum()) == 1, \
        "exactly one subset node must have no admissible candidate"
    return parents


def merge_roots(forest, field, ds, metric, dists=None):
    """Rerun the unconstrained rule on the forest's roots, producing a
    single in-tree."""
    sub_parents = nd_pass(forest.roots, field, ds, metric, dists=dists)
    parent = forest.parent.copy()
    parent[forest.roots] = sub_parents
    return ParentForest(parent, "merged")


def hnnd(ds, graph, field, metric, dists=None):
    """Two-stage construction: neighborhood-constrained pass, then the
    unconstrained merge over its roots.  Always yields one root."""
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    first = nnd_pass(graph, field, ds, metric, dists=dists)
    return merge_roots(first, field, ds, metric, dists=dists)


def nd_full(ds, field, metric, dists=None):
    """Unconstrained descent over the whole dataset (the one-stage
    baseline)."""
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    parent = nd_pass(np.arange(ds.n), field, ds, metric, dists=dists)
    return ParentForest(parent, "merged")
