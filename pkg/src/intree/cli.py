"""Command-line driver: load -> graph -> potential -> descent -> cut ->
evaluate, plus an edge-plot-only mode, a three-way method comparison and
a 2-D scatter rendering of labeled results.

Everything is seedless and deterministic: two runs with the same config
produce byte-identical labels and edge-plot files.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from .clustering import (cut_and_assign, edge_plot, edge_plot_from_tree,
                         error_rate, mst_cut, saliency_gap)
from .dataset import load_categorical, load_numeric, minmax_normalize
from .descent import merge_roots, nd_full, nnd_pass
from .errors import ParseError, UsageError
from .metrics import PairwiseDistances
from .neighbors import (complete_graph, delaunay_2d, knn_graph, mst,
                        mst_graph, save_graph)
from .potential import kernel_potential, local_potential
from .render import scatter_svg

__all__ = ["main"]


def _write_atomic(path, text):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _load(args):
    loader = load_numeric if args.kind == "numeric" else load_categorical
    ds = loader(args.input, truth_column=args.truth_column)
    if getattr(args, "minmax", False):
        ds = minmax_normalize(ds)
    return ds


def _build_graph(args, ds, dists):
    if args.graph == "knn":
        return knn_graph(ds, args.metric, args.k,
                         symmetrize=args.symmetrize, dists=dists)
    if args.graph == "dt":
        return delaunay_2d(ds)
    if args.graph == "mst":
        return mst_graph(mst(ds, args.metric, dists=dists))
    return complete_graph(ds.n)


def _build_potential(args, ds, graph, dists):
    method = args.potential or "kernel"
    if method == "kernel":
        return kernel_potential(ds, args.metric,
                                args.sigma if args.sigma is not None else 1.0,
                                dists=dists)
    return local_potential(ds, graph, args.metric, dists=dists)


def _cut_spec(args, n):
    if args.cut_count is not None and args.cut_threshold is not None:
        raise UsageError("give --cut-count or --cut-threshold, not both")
    if args.cut_count is None and args.cut_threshold is None:
        raise UsageError("a cut is required: --cut-count or --cut-threshold")
    if args.cut_count is not None:
        return {"count": args.cut_count}
    return {"threshold": args.cut_threshold}


def _validate_pipeline(args):
    if args.method == "mst-cut":
        if args.potential is not None or args.sigma is not None:
            raise UsageError("--method mst-cut takes no potential options")
        if getattr(args, "cut_threshold", None) is not None:
            raise UsageError("mst-cut cuts by count only")
    if args.potential == "local" and args.sigma is not None:
        raise UsageError("--sigma applies to the kernel potential only")
    if args.method == "nnd" and (
            getattr(args, "cut_count", None) is not None
            or getattr(args, "cut_threshold", None) is not None):
        raise UsageError("the neighborhood-constrained pass clusters by its "
                         "own roots; cutting applies to nd/hnnd/mst-cut")


def _labels_text(labels):
    return "".join(f"{i},{int(lab)}\n" for i, lab in enumerate(labels))


def _edgeplot_text(plot):
    return "".join(
        f"{r + 1},{float(plot.length[r])!r},"
        f"{int(plot.child[r])},{int(plot.parent[r])}\n"
        for r in range(len(plot)))


def _parents_text(forest, dists):
    rows = []
    for i in range(forest.n):
        p = int(forest.parent[i])
        w = 0.0 if p == i else float(dists.row(i)[p])
        rows.append(f"{i} {p} {w!r}\n")
    return "".join(rows)


def _run_pipeline(args, ds, dists, want_cut=True):
    """Shared graph/potential/descent stages.  Returns (forest, plot,
    labeling, timings); labeling is None when no cut was requested."""
    timings = {"graph": 0.0, "potential": 0.0, "step3": 0.0,
               "step4": 0.0, "cut_assign": 0.0}
    forest = plot = labeling = None
    graph = None
    if args.method == "mst-cut":
        t0 = time.perf_counter()
        tree = mst(ds, args.metric, dists=dists)
        timings["graph"] = time.perf_counter() - t0
        plot = edge_plot_from_tree(tree, ds, args.metric, dists=dists)
        if want_cut:
            spec = _cut_spec(args, ds.n)
            t0 = time.perf_counter()
            labeling = mst_cut(tree, spec["count"])
            timings["cut_assign"] = time.perf_counter() - t0
        return None, plot, labeling, timings

    if args.method in ("nnd", "hnnd"):
        t0 = time.perf_counter()
        graph = _build_graph(args, ds, dists)
        timings["graph"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    field = _build_potential(args, ds, graph, dists)
    timings["potential"] = time.perf_counter() - t0

    if args.method == "nd":
        t0 = time.perf_counter()
        forest = nd_full(ds, field, args.metric, dists=dists)
        timings["step4"] = time.perf_counter() - t0
    else:
        t0 = time.perf_counter()
        forest = nnd_pass(graph, field, ds, args.metric, dists=dists)
        timings["step3"] = time.perf_counter() - t0
        if args.method == "hnnd":
            t0 = time.perf_counter()
            forest = merge_roots(forest, field, ds, args.metric, dists=dists)
            timings["step4"] = time.perf_counter() - t0

    plot = edge_plot(forest, ds, args.metric, dists=dists)
    if args.method == "nnd":
        # roots of the constrained pass are the clusters; no cutting
        from .clustering import ClusterLabeling, _root_labels
        t0 = time.perf_counter()
        labeling = ClusterLabeling(_root_labels(forest.parent))
        timings["cut_assign"] = time.perf_counter() - t0
    elif want_cut:
        spec = _cut_spec(args, ds.n)
        t0 = time.perf_counter()
        labeling = cut_and_assign(forest, plot, **spec)
        timings["cut_assign"] = time.perf_counter() - t0
    if getattr(args, "potential_out", None):
        _write_atomic(args.potential_out,
                      "".join(f"{float(v)!r}\n" for v in field.values))
    if getattr(args, "graph_out", None) and graph is not None:
        with open(f"{args.graph_out}.tmp", "w", encoding="utf-8") as fh:
            save_graph(graph, fh, dists=dists)
        os.replace(f"{args.graph_out}.tmp", args.graph_out)
    return forest, plot, labeling, timings


def _summarize(ds, labeling, plot, timings, total, method):
    errors = rate = None
    if labeling is not None and ds.truth is not None:
        errors, rate, _ = error_rate(labeling, ds.truth)
    return {
        "n": ds.n,
        "d": ds.d,
        "method": method,
        "clusters": None if labeling is None else labeling.c,
        "errors": errors,
        "error_rate": rate,
        "timings": {**{k: round(v, 6) for k, v in timings.items()},
                    "total": round(total, 6)},
        "top_edge_lengths": [float(v) for v in plot.top(20)] if plot is not None else [],
    }


def _cmd_cluster(args):
    t_start = time.perf_counter()
    _validate_pipeline(args)
    ds = _load(args)
    dists = PairwiseDistances(ds, args.metric)
    forest, plot, labeling, timings = _run_pipeline(args, ds, dists)
    total = time.perf_counter() - t_start
    summary = _summarize(ds, labeling, plot, timings, total, args.method)
    if args.labels_out:
        _write_atomic(args.labels_out, _labels_text(labeling.labels))
    if args.edgeplot_out:
        _write_atomic(args.edgeplot_out, _edgeplot_text(plot))
    if args.summary_out:
        _write_atomic(args.summary_out, json.dumps(summary, indent=2) + "\n")
    if args.parents_out and forest is not None:
        _write_atomic(args.parents_out, _parents_text(forest, dists))
    print(json.dumps(summary, indent=2))
    return 0


def _cmd_edgeplot(args):
    _validate_pipeline(args)
    ds = _load(args)
    dists = PairwiseDistances(ds, args.metric)
    _, plot, _, _ = _run_pipeline(args, ds, dists, want_cut=False)
    _write_atomic(args.edgeplot_out, _edgeplot_text(plot))
    print(f"wrote {len(plot)} ranked edges to {args.edgeplot_out}")
    return 0


def _cmd_compare(args):
    t_start = time.perf_counter()
    if args.cut_count is None:
        raise UsageError("compare needs --cut-count (same cut for all methods)")
    if args.potential == "local":
        raise UsageError("compare uses the kernel potential")
    ds = _load(args)
    if ds.kind != "numeric":
        raise UsageError("compare requires a numeric dataset")
    dists = PairwiseDistances(ds, args.metric)
    out = {"n": ds.n, "d": ds.d, "cut_count": args.cut_count, "methods": {}}
    for method in ("mst-cut", "nd", "hnnd"):
        sub = argparse.Namespace(**vars(args))
        sub.method = method
        if method == "mst-cut":
            sub.potential = None
            sub.sigma = None
        t0 = time.perf_counter()
        _, plot, labeling, timings = _run_pipeline(sub, ds, dists)
        total = time.perf_counter() - t0
        entry = _summarize(ds, labeling, plot, timings, total, method)
        entry["saliency_gap"] = (saliency_gap(plot, args.cut_count)
                                 if 1 <= args.cut_count < len(plot) else None)
        entry["cluster_sizes"] = [int(s) for s in labeling.sizes()]
        out["methods"][method] = entry
    out["total_time"] = round(time.perf_counter() - t_start, 6)
    if args.summary_out:
        _write_atomic(args.summary_out, json.dumps(out, indent=2) + "\n")
    print(json.dumps(out, indent=2))
    return 0


def _cmd_render2d(args):
    ds = _load(args)
    if ds.kind != "numeric" or ds.d != 2:
        raise UsageError("rendering requires a numeric 2-D dataset")
    with open(args.labels, "r", encoding="utf-8") as fh:
        rows = [line.strip() for line in fh if line.strip()]
    if not rows:
        raise ParseError(f"labels file {args.labels} is empty")
    labels = np.empty(len(rows), dtype=np.int64)
    for r, line in enumerate(rows):
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"labels row {r}: expected 'id,label'")
        labels[r] = int(parts[1])
    if len(labels) != ds.n:
        raise UsageError(f"labels rows ({len(labels)}) != dataset rows ({ds.n})")
    with open(f"{args.out}.tmp", "w", encoding="utf-8") as fh:
        scatter_svg(ds.points, labels, fh)
    os.replace(f"{args.out}.tmp", args.out)
    print(f"wrote {args.out}")
    return 0


def _add_data_flags(p):
    p.add_argument("--input", required=True, help="delimited dataset file")
    p.add_argument("--kind", choices=("numeric", "categorical"),
                   default="numeric")
    p.add_argument("--truth-column", type=int, default=None)
    p.add_argument("--minmax", action="store_true",
                   help="per-column min-max scaling (off by default)")
    p.add_argument("--metric", choices=("euclidean", "cosine", "mismatch"),
                   default="euclidean")


def _add_pipeline_flags(p, with_method=True):
    p.add_argument("--graph", choices=("knn", "dt", "mst", "complete"),
                   default="knn")
    p.add_argument("--k", type=int, default=10, help="k-NN neighborhood size")
    p.add_argument("--symmetrize", action="store_true",
                   help="use the symmetric closure of the k-NN graph")
    p.add_argument("--potential", choices=("kernel", "local"), default=None)
    p.add_argument("--sigma", type=float, default=None,
                   help="kernel bandwidth (default 1.0)")
    if with_method:
        p.add_argument("--method", choices=("nd", "nnd", "hnnd", "mst-cut"),
                       default="hnnd")
    p.add_argument("--cut-count", type=int, default=None)
    p.add_argument("--cut-threshold", type=float, default=None)


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="intree",
        description="in-tree construction and edge-cut clustering")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="full pipeline with cut and labels")
    _add_data_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--labels-out", default=None)
    p.add_argument("--edgeplot-out", default=None)
    p.add_argument("--summary-out", default=None)
    p.add_argument("--graph-out", default=None)
    p.add_argument("--parents-out", default=None)
    p.add_argument("--potential-out", default=None)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("edgeplot", help="ranked edge lengths only")
    _add_data_flags(p)
    _add_pipeline_flags(p)
    p.add_argument("--edgeplot-out", required=True)
    p.add_argument("--potential-out", default=None)
    p.add_argument("--graph-out", default=None)
    p.set_defaults(func=_cmd_edgeplot)

    p = sub.add_parser("compare",
                       help="mst-cut vs nd vs hnnd at the same cut count")
    _add_data_flags(p)
    _add_pipeline_flags(p, with_method=False)
    p.add_argument("--summary-out", default=None)
    p.set_defaults(func=_cmd_compare, method=None, potential_out=None,
                   graph_out=None)

    p = sub.add_parser("render2d", help="colored scatter of labeled points")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("numeric", "categorical"),
                   default="numeric")
    p.add_argument("--truth-column", type=int, default=None)
    p.add_argument("--labels", required=True, help="labels file (id,label)")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_render2d)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
