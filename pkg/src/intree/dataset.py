"""Loading delimited numeric and categorical datasets.

Files are comma- or whitespace-delimited text, one data point per row.
An optional column may hold ground-truth class labels (for categorical
files in the UCI style the class is usually column 0).  Rows are never
reordered: node index == source row order.
"""

import io
import os

import numpy as np

from .errors import ParseError, UsageError

__all__ = ["Dataset", "load_numeric", "load_categorical", "save_delimited",
           "minmax_normalize"]


class Dataset:
    """An immutable N x d point matrix with optional ground-truth labels.

    Parameters
    ----------
    points : ndarray
        Shape (N, d).  float64 for kind="numeric", unicode tokens for
        kind="categorical".
    kind : str
        "numeric" or "categorical".
    truth : ndarray or None
        Length-N class labels (strings), or None.
    """

    def __init__(self, points, kind, truth=None):
        points = np.asarray(points)
        if points.ndim != 2 or points.shape[0] < 1 or points.shape[1] < 1:
            raise UsageError("points must be a non-empty N x d matrix")
        if kind not in ("numeric", "categorical"):
            raise UsageError(f"unknown dataset kind: {kind!r}")
        if kind == "numeric":
            points = points.astype(np.float64)
            if not np.all(np.isfinite(points)):
                raise ParseError("numeric dataset contains non-finite values")
        if truth is not None:
            truth = np.asarray(truth, dtype=object)
            if truth.shape != (points.shape[0],):
                raise UsageError("truth must have exactly one label per row")
        self.points = points
        self.kind = kind
        self.truth = truth
        points.setflags(write=False)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    @property
    def ids(self):
        return np.arange(self.n)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        if self.kind != other.kind or self.points.shape != other.points.shape:
            return False
        if not np.array_equal(self.points, other.points):
            return False
        if (self.truth is None) != (other.truth is None):
            return False
        return self.truth is None or np.array_equal(self.truth, other.truth)

    def __repr__(self):
        t = "with truth" if self.truth is not None else "no truth"
        return f"Dataset(kind={self.kind}, n={self.n}, d={self.d}, {t})"


def _iter_lines(source):
    if hasattr(source, "read"):
        return source.read().splitlines()
    with open(os.fspath(source), "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def _tokenize(line):
    # comma-delimited if any comma is present, otherwise whitespace
    if "," in line:
        return [t.strip() for t in line.split(",")]
    return line.split()


def _parse_rows(source):
    rows = []
    for line in _iter_lines(source):
        if not line.strip():
            continue
        tokens = _tokenize(line)
        r = len(rows)
        if rows and len(tokens) != len(rows[0]):
            raise ParseError(
                f"ragged row {r}: {len(tokens)} fields, expected {len(rows[0])}")
        rows.append(tokens)
    if not rows:
        raise ParseError("empty input: no data rows")
    return rows


def _split_truth(rows, truth_column):
    width = len(rows[0])
    if truth_column is None:
        return rows, None
    if not (0 <= truth_column < width):
        raise UsageError(
            f"truth column {truth_column} out of range for width {width}")
    truth = [r[truth_column] for r in rows]
    rest = [r[:truth_column] + r[truth_column + 1:] for r in rows]
    if len(rest[0]) == 0:
        raise UsageError("no feature columns left after removing truth column")
    return rest, truth


def load_numeric(source, truth_column=None):
    """Load a delimited numeric dataset.

    Parameters
    ----------
    source : path or file-like
        Comma- or whitespace-delimited rows of real numbers.
    truth_column : int, optional
        Column holding ground-truth labels; it is removed from the
        feature matrix and kept (as strings) in ``Dataset.truth``.
    """
    rows, truth = _split_truth(_parse_rows(source), truth_column)
    data = np.empty((len(rows), len(rows[0])), dtype=np.float64)
    for r, row in enumerate(rows):
        for c, tok in enumerate(row):
            try:
                data[r, c] = float(tok)
            except ValueError:
                raise ParseError(f"row {r}: non-numeric cell {tok!r}") from None
    if not np.all(np.isfinite(data)):
        raise ParseError("non-finite value in numeric dataset")
    return Dataset(data, "numeric", truth)


def load_categorical(source, truth_column=None):
    """Load a delimited categorical dataset (e.g. the UCI Mushroom file).

    Every cell must be a single non-empty token.  For the Mushroom
    layout the edible/poisonous class is column 0, so
    ``truth_column=0`` yields the 22 attribute columns as features.
    """
    rows, truth = _split_truth(_parse_rows(source), truth_column)
    for r, row in enumerate(rows):
        for tok in row:
            if tok == "":
                raise ParseError(f"row {r}: empty cell")
    data = np.array(rows, dtype=str)
    return Dataset(data, "categorical", truth)


def save_delimited(ds, target, delimiter=","):
    """Write a Dataset back to delimited text (truth as the last column).

    Reloading the result with ``truth_column = d`` reproduces the
    Dataset exactly; floats are written with full round-trip precision.
    """
    lines = []
    for r in range(ds.n):
        if ds.kind == "numeric":
            cells = [repr(float(v)) for v in ds.points[r]]
        else:
            cells = [str(v) for v in ds.points[r]]
        if ds.truth is not None:
            cells.append(str(ds.truth[r]))
        lines.append(delimiter.join(cells))
    text = "\n".join(lines) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(os.fspath(target), "w", encoding="utf-8") as fh:
            fh.write(text)


def minmax_normalize(ds):
    """Per-column min-max scaling to [0, 1] (numeric only, opt-in).

    Constant columns map to 0.  Off by default everywhere; provided for
    exploration only.
    """
    if ds.kind != "numeric":
        raise UsageError("min-max scaling requires a numeric dataset")
    lo = ds.points.min(axis=0)
    span = ds.points.max(axis=0) - lo
    span[span == 0] = 1.0
    return Dataset((ds.points - lo) / span, "numeric", ds.truth)


def from_text(text, kind="numeric", truth_column=None):
    """Convenience wrapper: load a dataset from an in-memory string."""
    loader = load_numeric if kind == "numeric" else load_categorical
    return loader(io.StringIO(text), truth_column)
