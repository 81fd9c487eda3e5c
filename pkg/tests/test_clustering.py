import numpy as np
import pytest

from intree import (PairwiseDistances, UsageError, cut_and_assign, edge_plot,
                    edge_plot_from_tree, error_rate, from_text, hnnd,
                    kernel_potential, knn_graph, mst, mst_cut, mst_to_forest,
                    saliency_gap)
from intree.clustering import ClusterLabeling, EdgePlot


def _numeric(pts):
    pts = np.atleast_2d(np.asarray(pts, dtype=float).T).T
    text = "\n".join(",".join(repr(float(v)) for v in row) for row in pts)
    return from_text(text)


def _four_point_tree():
    ds = _numeric([0, 1, 10, 12])
    dists = PairwiseDistances(ds, "euclidean")
    g = knn_graph(ds, "euclidean", 1, dists=dists)
    field = kernel_potential(ds, "euclidean", 1.0, dists=dists)
    forest = hnnd(ds, g, field, "euclidean", dists=dists)
    return ds, dists, forest


# ------------------------------------------------------------- edge plot

def test_edge_plot_four_points():
    ds, dists, forest = _four_point_tree()
    plot = edge_plot(forest, ds, "euclidean", dists=dists)
    assert plot.length.tolist() == [9.0, 2.0, 1.0]
    assert len(plot) == ds.n - 1


def test_edge_plot_single_node():
    ds = from_text("5\n")
    from intree import complete_graph, hnnd as _h
    forest = _h(ds, complete_graph(1),
                kernel_potential(ds, "euclidean", 1.0), "euclidean")
    plot = edge_plot(forest, ds, "euclidean")
    assert len(plot) == 0


def test_edge_plot_tie_orders_by_child():
    ds = _numeric([0, 1, 2])
    from intree import nd_full
    field = kernel_potential(ds, "euclidean", 1.0)
    forest = nd_full(ds, field, "euclidean")
    plot = edge_plot(forest, ds, "euclidean")
    assert plot.length.tolist() == [1.0, 1.0]
    assert plot.child.tolist() == sorted(plot.child.tolist())


# ------------------------------------------------------------------ cuts

def test_cut_zero_single_cluster():
    ds, dists, forest = _four_point_tree()
    plot = edge_plot(forest, ds, "euclidean", dists=dists)
    lab = cut_and_assign(forest, plot, count=0)
    assert lab.c == 1


def test_cut_one_splits_pairs():
    ds, dists, forest = _four_point_tree()
    plot = edge_plot(forest, ds, "euclidean", dists=dists)
    lab = cut_and_assign(forest, plot, count=1)
    assert lab.c == 2
    assert lab.labels[0] == lab.labels[1]
    assert lab.labels[2] == lab.labels[3]
    assert lab.labels[0] != lab.labels[2]


def test_cut_all_edges_singletons():
    ds, dists, forest = _four_point_tree()
    plot = edge_plot(forest, ds, "euclidean", dists=dists)
    lab = cut_and_assign(forest, plot, count=ds.n - 1)
    assert lab.c == ds.n


def test_cut_count_out_of_range():
    ds, dists, forest = _four_point_tree()
    plot = edge_plot(forest, ds, "euclidean", dists=dists)
    with pytest.raises(UsageError):
        cut_and_assign(forest, plot, count=ds.n)
    with pytest.raises(UsageError):
        cut_and_assign(forest, plot, count=1, threshold=1.0)
    with pytest.raises(UsageError):
        cut_and_assign(forest, plot)


def test_cut_threshold_matches_count():
    ds, dists, forest = _four_point_tree()
    plot = edge_plot(forest, ds, "euclidean", dists=dists)
    by_count = cut_and_assign(forest, plot, count=1)
    by_thresh = cut_and_assign(forest, plot, threshold=5.0)
    assert np.array_equal(by_count.labels, by_thresh.labels)


def test_cut_arithmetic_random():
    rng = np.random.default_rng(50)
    from intree import nd_full
    for _ in range(30):
        n = int(rng.integers(2, 40))
        ds = _numeric(np.round(rng.normal(size=n) * 5, 2))
        field = kernel_potential(ds, "euclidean", 1.0)
        forest = nd_full(ds, field, "euclidean")
        plot = edge_plot(forest, ds, "euclidean")
        k = int(rng.integers(0, n))
        lab = cut_and_assign(forest, plot, count=k)
        assert lab.c == k + 1
        # labels are the roots reached in the cut forest
        cut_children = set(plot.child[:k].tolist())
        parent = forest.parent.copy()
        for c in cut_children:
            parent[c] = c
        for i in range(n):
            j = i
            while parent[j] != j:
                j = int(parent[j])
            assert lab.labels[i] == j


# --------------------------------------------------------------- mst cut

def test_mst_cut_1d():
    ds = _numeric([0, 1, 3])
    tree = mst(ds, "euclidean")
    lab = mst_cut(tree, 1)
    assert lab.c == 2
    assert lab.labels[0] == lab.labels[1] != lab.labels[2]
    assert mst_cut(tree, 0).c == 1
    assert mst_cut(tree, 2).c == 3


def test_mst_to_forest_preserves_lengths():
    ds = _numeric([0, 1, 3, 8])
    tree = mst(ds, "euclidean")
    plot = edge_plot_from_tree(tree, ds, "euclidean")
    assert sorted(plot.length.tolist()) == sorted(w for _, _, w in tree.edges)
    forest = mst_to_forest(tree)
    forest.validate()
    assert forest.stage == "merged"


# ------------------------------------------------------------ error rate

def test_error_rate_identity_and_renaming():
    truth = np.array(list("aaabbbccc"), dtype=object)
    pred = ClusterLabeling(np.array([0, 0, 0, 1, 1, 1, 2, 2, 2]))
    errors, rate, c = error_rate(pred, truth)
    assert (errors, rate, c) == (0, 0.0, 3)
    renamed = ClusterLabeling(np.array([7, 7, 7, 3, 3, 3, 5, 5, 5]))
    assert error_rate(renamed, truth)[0] == 0


def test_error_rate_merged_classes():
    truth = np.array(["a"] * 50 + ["b"] * 50 + ["c"] * 50, dtype=object)
    pred = ClusterLabeling(np.array([0] * 50 + [1] * 100))
    errors, rate, c = error_rate(pred, truth)
    assert errors == 50 and rate == pytest.approx(1 / 3) and c == 2


def test_error_rate_pure_oversegmentation_scores_zero():
    truth = np.array(["e"] * 6 + ["p"] * 6, dtype=object)
    pred = ClusterLabeling(np.array([0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5]))
    errors, rate, c = error_rate(pred, truth)
    assert errors == 0 and c == 6


def test_error_rate_requires_truth():
    pred = ClusterLabeling(np.array([0, 1]))
    with pytest.raises(UsageError):
        error_rate(pred, None)
    with pytest.raises(UsageError):
        error_rate(pred, np.array(["a"], dtype=object))


def test_error_rate_relabel_invariance_random():
    rng = np.random.default_rng(51)
    for _ in range(30):
        n = int(rng.integers(4, 50))
        truth = rng.integers(0, 4, size=n).astype(str).astype(object)
        labels = rng.integers(0, 5, size=n)
        base = error_rate(ClusterLabeling(labels), truth)
        perm = rng.permutation(10)
        relabeled = ClusterLabeling(np.array([perm[v] for v in labels]))
        assert error_rate(relabeled, truth) == base


# -------------------------------------------------------------- saliency

def test_saliency_examples():
    plot = EdgePlot([2, 0, 1], [3, 3, 3], [1.0, 9.0, 2.0])
    assert plot.length.tolist() == [9.0, 2.0, 1.0]
    assert saliency_gap(plot, 1) == pytest.approx(4.5)
    flat = EdgePlot([0, 1, 2], [3, 3, 3], [2.0, 2.0, 2.0])
    assert saliency_gap(flat, 1) == 1.0
    big = EdgePlot([0, 1, 2], [3, 3, 3], [10.0, 10.0, 1.0])
    assert saliency_gap(big, 2) == pytest.approx(10.0)


def test_saliency_zero_denominator():
    plot = EdgePlot([0, 1], [2, 2], [3.0, 0.0])
    assert saliency_gap(plot, 1) == float("inf")


def test_saliency_rank_range():
    plot = EdgePlot([0, 1], [2, 2], [3.0, 1.0])
    with pytest.raises(UsageError):
        saliency_gap(plot, 0)
    with pytest.raises(UsageError):
        saliency_gap(plot, 2)
