"""2-D Delaunay triangulation by incremental insertion (Bowyer-Watson).

Geometric predicates are evaluated with a floating-point filter first
(Shewchuk-style error bounds) and fall back to exact rational
arithmetic when the filter cannot certify a sign.  Exactly co-circular
quadruples are resolved by a symbolic perturbation of the lifted
coordinate, ordered by point id (lower id = larger perturbation), so
the triangulation is a deterministic function of the input alone.

The triangulation keeps a single symbolic vertex "at infinity"
(index -1); triangles containing it represent the unbounded region
outside the convex hull, and their "circumdisk" is the open half-plane
beyond the corresponding hull edge plus the open edge itself.
"""

from fractions import Fraction

import numpy as np

from .errors import UsageError

__all__ = ["triangulate_edges"]

# float-filter slack; generous versions of Shewchuk's A-bounds
_ORIENT_ERR = 1e-14
_INCIRCLE_ERR = 1e-14


def _sign(x):
    return (x > 0) - (x < 0)


def _orient_exact(ax, ay, bx, by, cx, cy):
    ax, ay = Fraction(ax), Fraction(ay)
    bx, by = Fraction(bx), Fraction(by)
    cx, cy = Fraction(cx), Fraction(cy)
    return _sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _incircle_exact(pts, ids, a, b, c, p):
    """Sign of the incircle determinant for rows (a, b, c, p) of pts.

    Positive means p lies strictly inside the circumcircle of the CCW
    triangle (a, b, c).  A zero determinant (co-circular points) is
    broken by the id-ordered symbolic perturbation.
    """
    quad = (a, b, c, p)
    x = [Fraction(float(pts[v, 0])) for v in quad]
    y = [Fraction(float(pts[v, 1])) for v in quad]
    dx = [x[i] - x[3] for i in range(3)]
    dy = [y[i] - y[3] for i in range(3)]
    d2 = [dx[i] * dx[i] + dy[i] * dy[i] for i in range(3)]
    det = (d2[0] * (dx[1] * dy[2] - dx[2] * dy[1])
           + d2[1] * (dx[2] * dy[0] - dx[0] * dy[2])
           + d2[2] * (dx[0] * dy[1] - dx[1] * dy[0]))
    if det:
        return _sign(det)
    # cofactor of the lifted coordinate: +/- orientation of the other
    # three rows, sign alternating with row position
    for _, row in sorted((ids[quad[r]], r) for r in range(4)):
        others = [quad[j] for j in range(4) if j != row]
        m = _orient_exact(pts[others[0], 0], pts[others[0], 1],
                          pts[others[1], 0], pts[others[1], 1],
                          pts[others[2], 0], pts[others[2], 1])
        if m:
            return m if row % 2 == 0 else -m
    raise AssertionError("incircle perturbation failed: coincident points")


def _between_exact(pts, a, b, p):
    """True when p lies strictly inside the segment (a, b); p must be
    collinear with a and b."""
    pax = Fraction(float(pts[p, 0])) - Fraction(float(pts[a, 0]))
    pay = Fraction(float(pts[p, 1])) - Fraction(float(pts[a, 1]))
    pbx = Fraction(float(pts[p, 0])) - Fraction(float(pts[b, 0]))
    pby = Fraction(float(pts[p, 1])) - Fraction(float(pts[b, 1]))
    return pax * pbx + pay * pby < 0


class _Triangulation:
    def __init__(self, pts, ids):
        self.pts = pts
        self.ids = ids
        cap = 16
        self.va = np.empty(cap, dtype=np.int64)
        self.vb = np.empty(cap, dtype=np.int64)
        self.vc = np.empty(cap, dtype=np.int64)  # -1 marks the infinite vertex
        self.alive = np.zeros(cap, dtype=bool)
        self.count = 0
        self.dead = 0

    def _grow(self, need):
        cap = len(self.va)
        if self.count + need <= cap:
            return
        new = max(cap * 2, self.count + need)
        for name in ("va", "vb", "vc"):
            arr = np.empty(new, dtype=np.int64)
            arr[:self.count] = getattr(self, name)[:self.count]
            setattr(self, name, arr)
        alive = np.zeros(new, dtype=bool)
        alive[:self.count] = self.alive[:self.count]
        self.alive = alive

    def _compact(self):
        keep = np.flatnonzero(self.alive[:self.count])
        m = len(keep)
        self.va[:m] = self.va[keep]
        self.vb[:m] = self.vb[keep]
        self.vc[:m] = self.vc[keep]
        self.alive[:m] = True
        self.alive[m:self.count] = False
        self.count = m
        self.dead = 0

    def add(self, a, b, c):
        # rotate so that an infinite vertex, if any, sits last
        if a == -1:
            a, b, c = b, c, a
        elif b == -1:
            a, b, c = c, a, b
        self._grow(1)
        t = self.count
        self.va[t], self.vb[t], self.vc[t] = a, b, c
        self.alive[t] = True
        self.count += 1

    def _bad_triangles(self, p):
        """Indices of alive triangles whose circumdisk strictly contains p."""
        n = self.count
        alive = self.alive[:n]
        va, vb, vc = self.va[:n], self.vb[:n], self.vc[:n]
        pts = self.pts
        px, py = pts[p]
        bad = []

        fin = np.flatnonzero(alive & (vc >= 0))
        if fin.size:
            ax = pts[va[fin], 0] - px
            ay = pts[va[fin], 1] - py
            bx = pts[vb[fin], 0] - px
            by = pts[vb[fin], 1] - py
            cx = pts[vc[fin], 0] - px
            cy = pts[vc[fin], 1] - py
            a2 = ax * ax + ay * ay
            b2 = bx * bx + by * by
            c2 = cx * cx + cy * cy
            m1 = bx * cy - cx * by
            m2 = cx * ay - ax * cy
            m3 = ax * by - bx * ay
            det = a2 * m1 + b2 * m2 + c2 * m3
            perm = (a2 * (np.abs(bx * cy) + np.abs(cx * by))
                    + b2 * (np.abs(cx * ay) + np.abs(ax * cy))
                    + c2 * (np.abs(ax * by) + np.abs(bx * ay)))
            bound = _INCIRCLE_ERR * perm
            bad.extend(fin[det > bound].tolist())
            for t in fin[np.abs(det) <= bound].tolist():
                if _incircle_exact(pts, self.ids,
                                   va[t], vb[t], vc[t], p) > 0:
                    bad.append(t)

        inf = np.flatnonzero(alive & (vc < 0))
        if inf.size:
            ax, ay = pts[va[inf], 0], pts[va[inf], 1]
            bx, by = pts[vb[inf], 0], pts[vb[inf], 1]
            t1 = (bx - ax) * (py - ay)
            t2 = (by - ay) * (px - ax)
            det = t1 - t2
            bound = _ORIENT_ERR * (np.abs(t1) + np.abs(t2))
            bad.extend(inf[det > bound].tolist())
            for t in inf[np.abs(det) <= bound].tolist():
                s = _orient_exact(pts[va[t], 0], pts[va[t], 1],
                                  pts[vb[t], 0], pts[vb[t], 1], px, py)
                if s > 0 or (s == 0 and _between_exact(pts, va[t], vb[t], p)):
                    bad.append(t)
        return bad

    def insert(self, p):
        bad = self._bad_triangles(p)
        if not bad:
            raise AssertionError(f"no triangle circumdisk contains point {p}")
        edges = {}
        for t in bad:
            for u, v in ((self.va[t], self.vb[t]),
                         (self.vb[t], self.vc[t]),
                         (self.vc[t], self.va[t])):
                key = (int(u), int(v))
                if key in edges:
                    raise AssertionError("inconsistent cavity orientation")
                edges[key] = True
            self.alive[t] = False
            self.dead += 1
        boundary = [e for e in edges if (e[1], e[0]) not in edges]
        if len(boundary) + 2 * ((len(edges) - len(boundary)) // 2) != len(edges):
            raise AssertionError("cavity edge bookkeeping failed")
        for u, v in boundary:
            self.add(u, v, p)
        if self.dead > self.count // 2:
            self._compact()


def triangulate_edges(pts, ids=None):
    """Delaunay edges of distinct 2-D points.

    Parameters
    ----------
    pts : ndarray (M, 2) float64
        Distinct, finite points, M >= 3.
    ids : ndarray (M,) int, optional
        Tie-break identities for degenerate configurations; defaults to
        row order.

    Returns
    -------
    set of (i, j) row-index pairs with i < j.
    """
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    m = pts.shape[0]
    if ids is None:
        ids = np.arange(m)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    i0, i1 = int(order[0]), int(order[1])
    first = -1
    for k in range(2, m):
        j = int(order[k])
        s = _orient_exact(pts[i0, 0], pts[i0, 1], pts[i1, 0], pts[i1, 1],
                          pts[j, 0], pts[j, 1])
        if s != 0:
            first = k
            v0, v1, v2 = (i0, i1, j) if s > 0 else (i0, j, i1)
            break
    if first < 0:
        raise UsageError("all points are collinear; triangulation undefined")

    tri = _Triangulation(pts, np.asarray(ids))
    tri.add(v0, v1, v2)
    tri.add(v1, v0, -1)
    tri.add(v2, v1, -1)
    tri.add(v0, v2, -1)
    skip = {i0, i1, int(order[first])}
    for k in range(2, m):
        p = int(order[k])
        if p in skip:
            continue
        tri.insert(p)

    edges = set()
    for t in range(tri.count):
        if not tri.alive[t] or tri.vc[t] < 0:
            continue
        for u, v in ((tri.va[t], tri.vb[t]), (tri.vb[t], tri.vc[t]),
                     (tri.vc[t], tri.va[t])):
            edges.add((int(min(u, v)), int(max(u, v))))
    return edges
