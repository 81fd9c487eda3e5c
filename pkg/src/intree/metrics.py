"""Pairwise dissimilarities: euclidean, cosine distance, mismatch count.

All variants are symmetric, nonnegative and zero on identical rows.
Distance values feeding the descent stages must be bit-reproducible, so
every code path below reduces with plain elementwise numpy operations
(no BLAS calls, whose accumulation order can vary across shapes).
"""

import numpy as np

from .errors import UsageError

__all__ = ["METRICS", "check_metric", "distance", "row_distances",
           "PairwiseDistances"]

METRICS = ("euclidean", "cosine", "mismatch")

# full N x N matrices are only materialized below this many points;
# larger inputs fall back to recomputing rows on demand
MATRIX_CAP = 20000


def check_metric(kind, metric):
    """Reject metric/data-kind combinations that make no sense."""
    if metric not in METRICS:
        raise UsageError(f"unknown metric {metric!r}; choose from {METRICS}")
    if metric == "mismatch" and kind != "categorical":
        raise UsageError("mismatch distance requires categorical data")
    if metric in ("euclidean", "cosine") and kind != "numeric":
        raise UsageError(f"{metric} distance requires numeric data")


def _kind_of(points):
    return "numeric" if points.dtype.kind == "f" else "categorical"


def distance(x, y, metric):
    """Distance between two rows.

    Cosine distance is 1 - cos similarity; when exactly one vector is
    zero it is defined as 1, when both are zero as 0.
    """
    x = np.asarray(x)
    y = np.asarray(y)
    if x.shape != y.shape:
        raise UsageError("rows must have identical width")
    check_metric(_kind_of(x), metric)
    if metric == "euclidean":
        return float(np.sqrt(((x - y) ** 2).sum()))
    if metric == "cosine":
        if np.array_equal(x, y):
            return 0.0
        nx = float(np.sqrt((x * x).sum()))
        ny = float(np.sqrt((y * y).sum()))
        if nx == 0.0 or ny == 0.0:
            return 1.0
        return float(max(1.0 - (x * y).sum() / (nx * ny), 0.0))
    return float((x != y).sum())


def row_distances(points, i, metric, norms=None):
    """Distances from node i to every node, with d[i] exactly 0."""
    x = points[i]
    if metric == "euclidean":
        d = np.sqrt(((points - x) ** 2).sum(axis=1))
    elif metric == "cosine":
        if norms is None:
            norms = np.sqrt((points * points).sum(axis=1))
        dots = (points * x).sum(axis=1)
        ni = norms[i]
        if ni == 0.0:
            d = np.where(norms == 0.0, 0.0, 1.0)
        else:
            with np.errstate(invalid="ignore", divide="ignore"):
                d = np.maximum(1.0 - dots / (norms * ni), 0.0)
            d[norms == 0.0] = 1.0
        # bit-identical rows are exactly coincident, never rounding noise
        d[np.all(points == x, axis=1)] = 0.0
    else:
        d = (points != x).sum(axis=1).astype(np.float64)
    d[i] = 0.0
    return d


class PairwiseDistances:
    """Cached access to the rows of the pairwise distance matrix.

    Below ``cap`` points the full matrix is materialized once (built by
    stacking ``row_distances`` results so matrix rows are bit-identical
    to freshly computed ones); above it, rows are recomputed on demand.
    """

    def __init__(self, ds, metric, cap=MATRIX_CAP):
        check_metric(ds.kind, metric)
        self.points = ds.points
        self.metric = metric
        self.n = ds.n
        self._norms = None
        if metric == "cosine":
            p = ds.points
            self._norms = np.sqrt((p * p).sum(axis=1))
        self.matrix = None
        if ds.n <= cap:
            m = np.empty((ds.n, ds.n), dtype=np.float64)
            for i in range(ds.n):
                m[i] = row_distances(ds.points, i, metric, self._norms)
            self.matrix = m

    def row(self, i):
        if self.matrix is not None:
            return self.matrix[i]
        return row_distances(self.points, i, self.metric, self._norms)

    def rows(self, idx):
        """Stack of rows for an index array (gathered or recomputed)."""
        if self.matrix is not None:
            return self.matrix[idx]
        return np.vstack([self.row(int(i)) for i in idx])
