import io
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from intree import (PairwiseDistances, UsageError, complete_graph,
                    delaunay_2d, from_text, knn_graph, load_edge_graph, mst,
                    mst_graph, save_graph)


def _numeric(pts):
    text = "\n".join(",".join(repr(float(v)) for v in row) for row in pts)
    return from_text(text)


# ---------------------------------------------------------------- k-NN

def test_knn_1d_example():
    ds = from_text("0\n1\n4\n")
    g = knn_graph(ds, "euclidean", 1)
    assert g.neighbors(0).tolist() == [1]
    assert g.neighbors(1).tolist() == [0]
    assert g.neighbors(2).tolist() == [1]
    g.validate()


def test_knn_full_neighborhoods():
    ds = from_text("0\n1\n4\n7\n")
    g = knn_graph(ds, "euclidean", 3)
    assert g.is_complete()
    for i in range(4):
        assert g.neighbors(i).tolist() == [j for j in range(4) if j != i]


def test_knn_tie_to_lower_index():
    ds = from_text("0\n0\n5\n")
    g = knn_graph(ds, "euclidean", 1)
    assert g.neighbors(2).tolist() == [0]
    assert g.neighbors(0).tolist() == [1]
    assert g.neighbors(1).tolist() == [0]


def test_knn_k_range():
    ds = from_text("0\n1\n4\n")
    with pytest.raises(UsageError):
        knn_graph(ds, "euclidean", 0)
    with pytest.raises(UsageError):
        knn_graph(ds, "euclidean", 3)


def test_knn_symmetrize_union():
    # node 2 is nearest to 3 but not vice versa
    ds = from_text("0\n1\n10\n12\n")
    g = knn_graph(ds, "euclidean", 1)
    assert g.neighbors(2).tolist() == [3]
    assert g.neighbors(1).tolist() == [0]
    s = knn_graph(ds, "euclidean", 1, symmetrize=True)
    assert s.degree_symmetric()
    assert s.neighbors(0).tolist() == [1]
    assert s.neighbors(2).tolist() == [3]


def test_knn_brute_equals_kdtree():
    rng = np.random.default_rng(11)
    # tie-heavy grid plus exact duplicates
    grid = np.array([(float(x), float(y)) for x in range(12)
                     for y in range(12)])
    dup = np.vstack([grid, grid[::7]])
    for pts in (rng.normal(size=(150, 3)), dup):
        ds = _numeric(pts)
        for k in (1, 3, 9):
            a = knn_graph(ds, "euclidean", k, force="brute")
            b = knn_graph(ds, "euclidean", k, force="kdtree")
            assert np.array_equal(a.indptr, b.indptr)
            assert np.array_equal(a.indices, b.indices)


def test_knn_kdtree_requires_euclidean():
    ds = from_text("0\n1\n4\n")
    with pytest.raises(UsageError):
        knn_graph(ds, "cosine", 1, force="kdtree")


def test_complete_graph():
    g = complete_graph(5)
    assert g.is_complete()
    g.validate()


# ------------------------------------------------------------- Delaunay

def _oracle_delaunay_edges(pts):
    """Independent check: a triangle belongs to the triangulation iff its
    circumcircle strictly contains no other point (generic position);
    exact rational arithmetic throughout."""
    n = len(pts)
    P = [(Fraction(float(x)), Fraction(float(y))) for x, y in pts]

    def orient(a, b, c):
        return ((P[b][0] - P[a][0]) * (P[c][1] - P[a][1])
                - (P[b][1] - P[a][1]) * (P[c][0] - P[a][0]))

    def incircle(a, b, c, d):
        ax, ay = P[a][0] - P[d][0], P[a][1] - P[d][1]
        bx, by = P[b][0] - P[d][0], P[b][1] - P[d][1]
        cx, cy = P[c][0] - P[d][0], P[c][1] - P[d][1]
        return ((ax * ax + ay * ay) * (bx * cy - cx * by)
                + (bx * bx + by * by) * (cx * ay - ax * cy)
                + (cx * cx + cy * cy) * (ax * by - bx * ay))

    edges = set()
    for i, j, k in combinations(range(n), 3):
        o = orient(i, j, k)
        if o == 0:
            continue
        a, b, c = (i, j, k) if o > 0 else (i, k, j)
        if all(incircle(a, b, c, d) <= 0
               for d in range(n) if d not in (i, j, k)):
            edges.update({(min(i, j), max(i, j)), (min(j, k), max(j, k)),
                          (min(i, k), max(i, k))})
    return edges


def _graph_edges(g):
    return {(i, int(j)) for i in range(g.n) for j in g.neighbors(i) if i < j}


def test_delaunay_triangle():
    ds = from_text("0,0\n1,0\n0,1\n")
    g = delaunay_2d(ds)
    assert _graph_edges(g) == {(0, 1), (0, 2), (1, 2)}


def test_delaunay_interior_point():
    ds = from_text("0,0\n4,0\n2,3\n2,1\n")
    g = delaunay_2d(ds)
    edges = _graph_edges(g)
    assert len(edges) == 6
    assert {(0, 3), (1, 3), (2, 3)} <= edges


def test_delaunay_collinear_error():
    with pytest.raises(UsageError):
        delaunay_2d(from_text("0,0\n1,1\n2,2\n"))


def test_delaunay_preconditions():
    with pytest.raises(UsageError):
        delaunay_2d(from_text("0,0,0\n1,0,0\n0,1,0\n"))
    with pytest.raises(UsageError):
        delaunay_2d(from_text("0,0\n1,0\n"))


def test_delaunay_matches_brute_force_oracle():
    rng = np.random.default_rng(21)
    for trial in range(60):
        n = rng.integers(3, 13)
        pts = rng.normal(size=(n, 2))
        oracle = _oracle_delaunay_edges(pts)
        if not oracle:
            continue
        g = delaunay_2d(_numeric(pts))
        assert _graph_edges(g) == oracle, f"trial {trial}"


def test_delaunay_cocircular_deterministic():
    ds = from_text("0,0\n0,1\n1,0\n1,1\n")
    e1 = _graph_edges(delaunay_2d(ds))
    e2 = _graph_edges(delaunay_2d(ds))
    assert e1 == e2
    assert len(e1) == 5  # four sides plus exactly one diagonal
    assert ((1, 2) in e1) != ((0, 3) in e1)


def test_delaunay_grid_is_symmetric_and_planar():
    pts = [(float(x), float(y)) for x in range(5) for y in range(5)]
    g = delaunay_2d(_numeric(np.array(pts)))
    assert g.degree_symmetric()
    # Euler bound for planar triangulations: e = 3n - 3 - hull
    assert len(_graph_edges(g)) == 3 * 25 - 3 - 16


def test_delaunay_duplicate_points_collapse():
    ds = from_text("0,0\n1,0\n0,1\n0,0\n")
    g = delaunay_2d(ds)
    assert set(g.neighbors(0).tolist()) == {1, 2, 3}
    assert set(g.neighbors(3).tolist()) == {0, 1, 2}


# ------------------------------------------------------------------ MST

def _prufer_tree_edges(seq, n):
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    seq = list(seq)
    leaves = sorted(i for i in range(n) if degree[i] == 1)
    for v in seq:
        leaf = leaves.pop(0)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1:
            import bisect
            bisect.insort(leaves, v)
    edges.append(tuple(leaves[:2]))
    return edges


def _min_spanning_total(D):
    n = len(D)
    if n == 1:
        return 0.0
    if n == 2:
        return D[0][1]
    best = np.inf
    for seq in product(range(n), repeat=n - 2):
        total = sum(D[u][v] for u, v in _prufer_tree_edges(seq, n))
        best = min(best, total)
    return best


def test_mst_1d_example():
    ds = from_text("0\n1\n3\n")
    t = mst(ds, "euclidean")
    t.validate()
    assert sorted(t.edges) == [(0, 1, 1.0), (1, 2, 2.0)]


def test_mst_single_node():
    assert mst(from_text("5\n"), "euclidean").edges == []


def test_mst_equilateral_tie_rule():
    # pairwise-equidistant under the mismatch metric: exact 3-way tie
    from intree import load_categorical
    ds = load_categorical(io.StringIO("a,b\nb,a\nc,c"))
    t = mst(ds, "mismatch")
    assert sorted((u, v) for u, v, _ in t.edges) == [(0, 1), (0, 2)]


def test_mst_total_is_minimal_exhaustive():
    rng = np.random.default_rng(13)
    for n in (4, 5, 6, 7):
        pts = rng.normal(size=(n, 2))
        ds = _numeric(pts)
        dists = PairwiseDistances(ds, "euclidean")
        t = mst(ds, "euclidean", dists=dists)
        t.validate()
        total = sum(w for _, _, w in t.edges)
        oracle = _min_spanning_total(dists.matrix)
        assert total == pytest.approx(oracle, rel=1e-12)


def test_mst_graph_is_symmetric():
    ds = from_text("0\n1\n3\n7\n")
    g = mst_graph(mst(ds, "euclidean"))
    assert g.degree_symmetric()
    g.validate()


# --------------------------------------------------- edge-list round trip

def test_graph_export_and_ingest():
    ds = from_text("0\n1\n4\n")
    g = knn_graph(ds, "euclidean", 1)
    buf = io.StringIO()
    save_graph(g, buf, dists=PairwiseDistances(ds, "euclidean"))
    lines = buf.getvalue().strip().splitlines()
    assert lines[0].split()[:2] == ["0", "1"]
    loaded = load_edge_graph(io.StringIO(buf.getvalue()), 3)
    assert loaded.degree_symmetric()
    assert set(loaded.neighbors(1).tolist()) == {0, 2}
