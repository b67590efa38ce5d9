"""Pure-Python/numpy kernels.

Reference implementation of the hot numeric loops.  The compiled module
(_speedups.pyx) mirrors every arithmetic expression here in the same
IEEE-754 evaluation order, so the two backends return bit-identical
results; keep the bodies in sync when editing either file.

All functions take plain float64 arrays (vertex coordinates xs/ys,
cumulative chord stations cum, unit piece directions ex/ey, unit vertex
bisectors bx/by) as produced by RefPolyline.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

# Projection status codes (shared with the compiled backend).
OK = 0
DEGENERATE_CENTER = 1
RAY_PARALLEL = 2

_TIE_REL = 1e-9
_PAR_EPS = 1e-12


def nearest_vertex(xs, ys, ax, ay):
    """Largest vertex index within the tie band of the minimum distance."""
    dx = xs - ax
    dy = ys - ay
    dist = np.sqrt(dx * dx + dy * dy)
    dmin = float(dist.min())
    thresh = dmin + _TIE_REL * (1.0 + dmin)
    m = len(xs) - 1 - int(np.argmax((dist <= thresh)[::-1]))
    return m, dmin


def ray_transform(xs, ys, cum, ex, ey, p, ax, ay):
    """Perpendicular projection onto piece p extended to an infinite line."""
    vx = ax - xs[p]
    vy = ay - ys[p]
    s = cum[p] + (vx * ex[p] + vy * ey[p])
    d = ex[p] * vy - ey[p] * vx
    return s, d, OK


def fan_transform(xs, ys, cum, ex, ey, bx, by, p, ax, ay):
    """Projection onto piece p along the ray through the bisector fan center.

    The fan center O is the intersection of the unit bisectors at the two
    junction vertices of the piece; the query maps to the point where the
    line O->query crosses the piece line.  Parallel bisectors degenerate to
    the perpendicular (ray) transform.
    """
    b1x = bx[p]
    b1y = by[p]
    b2x = bx[p + 1]
    b2y = by[p + 1]
    cb = b1x * b2y - b1y * b2x
    if abs(cb) <= _PAR_EPS:
        return ray_transform(xs, ys, cum, ex, ey, p, ax, ay)
    t = ((xs[p + 1] - xs[p]) * b2y - (ys[p + 1] - ys[p]) * b2x) / cb
    ox = xs[p] + t * b1x
    oy = ys[p] + t * b1y
    rx = ax - ox
    ry = ay - oy
    rnorm = math.sqrt(rx * rx + ry * ry)
    if rnorm <= _PAR_EPS * (1.0 + math.sqrt(ox * ox + oy * oy)):
        return 0.0, 0.0, DEGENERATE_CENTER
    epx = ex[p]
    epy = ey[p]
    den = rx * epy - ry * epx
    if abs(den) <= _PAR_EPS * rnorm:
        return 0.0, 0.0, RAY_PARALLEL
    u = ((xs[p] - ox) * epy - (ys[p] - oy) * epx) / den
    fx = ox + u * rx
    fy = oy + u * ry
    s = cum[p] + ((fx - xs[p]) * epx + (fy - ys[p]) * epy)
    d = epx * (ay - ys[p]) - epy * (ax - xs[p])
    return s, d, OK


def _dispatch(xs, ys, cum, ex, ey, bx, by, m, ax, ay):
    """Route a query to the fan or ray transform given its nearest vertex."""
    n = len(xs)
    if 0 < m < n - 1:
        vx = ax - xs[m]
        vy = ay - ys[m]
        vminus = vx * (xs[m - 1] - xs[m]) + vy * (ys[m - 1] - ys[m])
        vplus = vx * (xs[m + 1] - xs[m]) + vy * (ys[m + 1] - ys[m])
        if vminus < vplus:
            m += 1
        return fan_transform(xs, ys, cum, ex, ey, bx, by, m - 1, ax, ay)
    if m == 0:
        return ray_transform(xs, ys, cum, ex, ey, 0, ax, ay)
    return ray_transform(xs, ys, cum, ex, ey, n - 2, ax, ay)


def project_point(xs, ys, cum, ex, ey, bx, by, ax, ay):
    """Project one Cartesian point; returns (s, d, status)."""
    m, _ = nearest_vertex(xs, ys, ax, ay)
    return _dispatch(xs, ys, cum, ex, ey, bx, by, m, ax, ay)


def project_batch(xs, ys, cum, ex, ey, bx, by, pxs, pys):
    """Project many points; returns (ss, ds, status, bad_index).

    status is the first nonzero per-point status (0 when all succeeded) and
    bad_index the index it occurred at (-1 when all succeeded).
    """
    npts = len(pxs)
    ss = np.empty(npts)
    ds = np.empty(npts)
    nvert = len(xs)
    # Vectorized nearest-vertex scan (row-chunked to bound memory).
    chunk = max(1, 4_000_000 // max(nvert, 1))
    for lo in range(0, npts, chunk):
        hi = min(lo + chunk, npts)
        dx = pxs[lo:hi, None] - xs[None, :]
        dy = pys[lo:hi, None] - ys[None, :]
        dist = np.sqrt(dx * dx + dy * dy)
        dmin = dist.min(axis=1)
        thresh = dmin + _TIE_REL * (1.0 + dmin)
        ms = nvert - 1 - np.argmax((dist <= thresh[:, None])[:, ::-1], axis=1)
        for i in range(lo, hi):
            s, d, status = _dispatch(xs, ys, cum, ex, ey, bx, by,
                                     int(ms[i - lo]), pxs[i], pys[i])
            if status != OK:
                return ss, ds, status, i
            ss[i] = s
            ds[i] = d
    return ss, ds, OK, -1


def scan_project(xs, ys, cum, ex, ey, ax, ay, resolution, ext, n_steps):
    """Dense-station scan: station minimizing distance to the query.

    Evaluates foot points at n_steps stations -ext + k*resolution over the
    extended polyline; ties within the relative band resolve to the largest
    station.  Returns (s, d).
    """
    n_pieces = len(cum) - 1
    k = np.arange(n_steps)
    sigma = -ext + k * resolution
    j = np.clip(np.searchsorted(cum, sigma, side="right") - 1, 0, n_pieces - 1)
    fx = xs[j] + (sigma - cum[j]) * ex[j]
    fy = ys[j] + (sigma - cum[j]) * ey[j]
    ddx = ax - fx
    ddy = ay - fy
    dist = np.sqrt(ddx * ddx + ddy * ddy)
    dmin = float(dist.min())
    thresh = dmin + _TIE_REL * (1.0 + dmin)
    kk = n_steps - 1 - int(np.argmax((dist <= thresh)[::-1]))
    jj = int(j[kk])
    s = float(sigma[kk])
    d = ex[jj] * (ay - ys[jj]) - ey[jj] * (ax - xs[jj])
    return s, d


_PAIR_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _seg_pairs(n_seg):
    pair = _PAIR_CACHE.get(n_seg)
    if pair is None:
        pair = np.triu_indices(n_seg, k=2)
        _PAIR_CACHE[n_seg] = pair
    return pair


def has_self_intersection(xs, ys):
    """Whether any two non-adjacent path segments share a point."""
    n_seg = len(xs) - 1
    if n_seg < 3:
        return False
    ii, jj = _seg_pairs(n_seg)
    ax = xs[ii]
    ay = ys[ii]
    bx = xs[ii + 1]
    by = ys[ii + 1]
    cx = xs[jj]
    cy = ys[jj]
    dx = xs[jj + 1]
    dy = ys[jj + 1]
    o1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    o2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
    o3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
    o4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
    proper = (((o1 > 0) != (o2 > 0)) & (o1 != 0) & (o2 != 0)
              & ((o3 > 0) != (o4 > 0)) & (o3 != 0) & (o4 != 0))

    def onseg(px, py, qx, qy, rx, ry):
        return ((np.minimum(px, qx) <= rx) & (rx <= np.maximum(px, qx))
                & (np.minimum(py, qy) <= ry) & (ry <= np.maximum(py, qy)))

    col = (((o1 == 0) & onseg(ax, ay, bx, by, cx, cy))
           | ((o2 == 0) & onseg(ax, ay, bx, by, dx, dy))
           | ((o3 == 0) & onseg(cx, cy, dx, dy, ax, ay))
           | ((o4 == 0) & onseg(cx, cy, dx, dy, bx, by)))
    return bool(np.any(proper | col))


def path_point_min_distance(xs, ys, px, py):
    """Minimum distance from a point to a polyline path (clamped segments)."""
    if len(xs) < 2:
        dx = px - xs[0]
        dy = py - ys[0]
        return float(math.sqrt(dx * dx + dy * dy))
    vx = xs[1:] - xs[:-1]
    vy = ys[1:] - ys[:-1]
    den = vx * vx + vy * vy
    wx = px - xs[:-1]
    wy = py - ys[:-1]
    safe = np.where(den > 0.0, den, 1.0)
    t = np.where(den > 0.0, (wx * vx + wy * vy) / safe, 0.0)
    t = np.clip(t, 0.0, 1.0)
    fx = xs[:-1] + t * vx
    fy = ys[:-1] + t * vy
    ddx = px - fx
    ddy = py - fy
    dist = np.sqrt(ddx * ddx + ddy * ddy)
    return float(dist.min())
