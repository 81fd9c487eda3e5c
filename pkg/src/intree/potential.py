"""Per-node potential estimation.

The kernel estimator sums an exponential kernel over the whole dataset
(self term included; it contributes a constant -1 and cannot change any
ordering).  The local estimator is the nonparametric stand-in: mean
distance to the graph neighbors, low in dense regions.
"""

import numpy as np

from .errors import UsageError
from .metrics import PairwiseDistances, check_metric

__all__ = ["PotentialField", "kernel_potential", "local_potential"]

_BLOCK = 256


class PotentialField:
    """Length-N vector of potentials plus how it was estimated."""

    def __init__(self, values, method, sigma=None):
        self.values = np.asarray(values, dtype=np.float64)
        self.method = method
        self.sigma = sigma
        if not np.all(np.isfinite(self.values)):
            raise UsageError("potential field contains non-finite values")
        self.values.setflags(write=False)

    @property
    def n(self):
        return len(self.values)


def kernel_potential(ds, metric, sigma, dists=None):
    """P_i = -sum_j exp(-d(i,j)/sigma), summed over every j including i.

    Summation uses numpy's deterministic reduction over rows in index
    order, so results are bit-reproducible run to run.  Kernel underflow
    to zero for far pairs is accepted silently (correct limit behavior).
    """
    check_metric(ds.kind, metric)
    if not sigma > 0:
        raise UsageError(f"sigma must be positive, got {sigma}")
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    n = ds.n
    values = np.empty(n, dtype=np.float64)
    with np.errstate(under="ignore"):
        for start in range(0, n, _BLOCK):
            idx = np.arange(start, min(start + _BLOCK, n))
            block = dists.rows(idx)
            values[idx] = -np.exp(-block / sigma).sum(axis=1)
    return PotentialField(values, "kernel", sigma)


def local_potential(ds, graph, metric, dists=None):
    """Mean distance from each node to its graph neighbors (dense regions
    get low potential); no bandwidth parameter."""
    check_metric(ds.kind, metric)
    if graph.n != ds.n:
        raise UsageError("graph and dataset sizes differ")
    if dists is None:
        dists = PairwiseDistances(ds, metric)
    values = np.empty(ds.n, dtype=np.float64)
    for i in range(ds.n):
        nb = graph.neighbors(i)
        if len(nb) == 0:
            raise UsageError(f"node {i} has no neighbors; "
                             "local potential undefined")
        values[i] = dists.row(i)[nb].mean()
    return PotentialField(values, "local")
