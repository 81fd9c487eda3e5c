"""Minimal SVG scatter rendering of a labeled 2-D dataset."""

import os

import numpy as np

from .errors import UsageError

__all__ = ["scatter_svg"]

_PALETTE = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
            "#a65628", "#f781bf", "#17becf", "#666666", "#bcbd22",
            "#8c564b", "#00aa88", "#1b3a8c", "#d4a017", "#5e2d79"]


def scatter_svg(points, labels, target, size=640, margin=24, radius=3.0):
    """Write one colored scatter plot, colors keyed by cluster label.

    Labels are mapped to palette colors in sorted-label order (cycling
    when there are more labels than palette entries).
    """
    points = np.asarray(points, dtype=np.float64)
    labels = np.asarray(labels)
    if points.ndim != 2 or points.shape[1] != 2:
        raise UsageError("scatter rendering requires 2-D numeric points")
    if len(labels) != len(points):
        raise UsageError("labels and points have different lengths")
    if len(points) == 0:
        raise UsageError("nothing to render: empty input")
    lo = points.min(axis=0)
    span = points.max(axis=0) - lo
    span[span == 0] = 1.0
    inner = size - 2 * margin
    color_of = {lab: _PALETTE[k % len(_PALETTE)]
                for k, lab in enumerate(sorted(set(labels.tolist())))}
    rows = [f'<svg xmlns="http://www.w3.org/2000/svg" '
            f'width="{size}" height="{size}" '
            f'viewBox="0 0 {size} {size}">',
            f'<rect width="{size}" height="{size}" fill="white"/>']
    for (x, y), lab in zip(points, labels):
        cx = margin + inner * (x - lo[0]) / span[0]
        cy = size - margin - inner * (y - lo[1]) / span[1]
        rows.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius}" '
                    f'fill="{color_of[lab]}"/>')
    rows.append("</svg>")
    text = "\n".join(rows) + "\n"
    if hasattr(target, "write"):
        target.write(text)
    else:
        with open(os.fspath(target), "w", encoding="utf-8") as fh:
            fh.write(text)
