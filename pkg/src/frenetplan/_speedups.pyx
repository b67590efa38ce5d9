# cython: language_level=3
"""Compiled kernels.

Line-for-line mirror of _kernels_py.py (keep the two in sync).  Every
arithmetic expression preserves the same IEEE-754 evaluation order, and
the build disables FP contraction, so results are bit-identical to the
Python fallback.
"""

import numpy as np

from libc.math cimport fabs, sqrt

BACKEND = "compiled"

OK = 0
DEGENERATE_CENTER = 1
RAY_PARALLEL = 2

cdef double _TIE_REL = 1e-9
cdef double _PAR_EPS = 1e-12

cdef int _OK = 0
cdef int _DEGENERATE_CENTER = 1
cdef int _RAY_PARALLEL = 2


cdef int _nearest_vertex_c(const double[::1] xs, const double[::1] ys,
                           double ax, double ay) nogil:
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t c
    cdef double dx, dy, dist
    cdef double dmin = 0.0
    cdef double thresh
    for c in range(n):
        dx = xs[c] - ax
        dy = ys[c] - ay
        dist = sqrt(dx * dx + dy * dy)
        if c == 0 or dist < dmin:
            dmin = dist
    thresh = dmin + _TIE_REL * (1.0 + dmin)
    for c in range(n - 1, -1, -1):
        dx = xs[c] - ax
        dy = ys[c] - ay
        dist = sqrt(dx * dx + dy * dy)
        if dist <= thresh:
            return <int>c
    return 0


cdef int _ray_c(const double[::1] xs, const double[::1] ys,
                const double[::1] cum, const double[::1] ex, const double[::1] ey,
                Py_ssize_t p, double ax, double ay,
                double* s_out, double* d_out) nogil:
    cdef double vx = ax - xs[p]
    cdef double vy = ay - ys[p]
    s_out[0] = cum[p] + (vx * ex[p] + vy * ey[p])
    d_out[0] = ex[p] * vy - ey[p] * vx
    return _OK


cdef int _fan_c(const double[::1] xs, const double[::1] ys,
                const double[::1] cum, const double[::1] ex, const double[::1] ey,
                const double[::1] bx, const double[::1] by,
                Py_ssize_t p, double ax, double ay,
                double* s_out, double* d_out) nogil:
    cdef double b1x = bx[p]
    cdef double b1y = by[p]
    cdef double b2x = bx[p + 1]
    cdef double b2y = by[p + 1]
    cdef double cb = b1x * b2y - b1y * b2x
    cdef double t, ox, oy, rx, ry, rnorm, epx, epy, den, u, fx, fy
    if fabs(cb) <= _PAR_EPS:
        return _ray_c(xs, ys, cum, ex, ey, p, ax, ay, s_out, d_out)
    t = ((xs[p + 1] - xs[p]) * b2y - (ys[p + 1] - ys[p]) * b2x) / cb
    ox = xs[p] + t * b1x
    oy = ys[p] + t * b1y
    rx = ax - ox
    ry = ay - oy
    rnorm = sqrt(rx * rx + ry * ry)
    if rnorm <= _PAR_EPS * (1.0 + sqrt(ox * ox + oy * oy)):
        s_out[0] = 0.0
        d_out[0] = 0.0
        return _DEGENERATE_CENTER
    epx = ex[p]
    epy = ey[p]
    den = rx * epy - ry * epx
    if fabs(den) <= _PAR_EPS * rnorm:
        s_out[0] = 0.0
        d_out[0] = 0.0
        return _RAY_PARALLEL
    u = ((xs[p] - ox) * epy - (ys[p] - oy) * epx) / den
    fx = ox + u * rx
    fy = oy + u * ry
    s_out[0] = cum[p] + ((fx - xs[p]) * epx + (fy - ys[p]) * epy)
    d_out[0] = epx * (ay - ys[p]) - epy * (ax - xs[p])
    return _OK


cdef int _dispatch_c(const double[::1] xs, const double[::1] ys,
                     const double[::1] cum, const double[::1] ex, const double[::1] ey,
                     const double[::1] bx, const double[::1] by,
                     Py_ssize_t m, double ax, double ay,
                     double* s_out, double* d_out) nogil:
    cdef Py_ssize_t n = xs.shape[0]
    cdef double vx, vy, vminus, vplus
    if 0 < m < n - 1:
        vx = ax - xs[m]
        vy = ay - ys[m]
        vminus = vx * (xs[m - 1] - xs[m]) + vy * (ys[m - 1] - ys[m])
        vplus = vx * (xs[m + 1] - xs[m]) + vy * (ys[m + 1] - ys[m])
        if vminus < vplus:
            m += 1
        return _fan_c(xs, ys, cum, ex, ey, bx, by, m - 1, ax, ay, s_out, d_out)
    if m == 0:
        return _ray_c(xs, ys, cum, ex, ey, 0, ax, ay, s_out, d_out)
    return _ray_c(xs, ys, cum, ex, ey, n - 2, ax, ay, s_out, d_out)


def nearest_vertex(const double[::1] xs, const double[::1] ys, double ax, double ay):
    """Largest vertex index within the tie band of the minimum distance."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t c
    cdef double dx, dy, dist
    cdef double dmin = 0.0
    for c in range(n):
        dx = xs[c] - ax
        dy = ys[c] - ay
        dist = sqrt(dx * dx + dy * dy)
        if c == 0 or dist < dmin:
            dmin = dist
    return _nearest_vertex_c(xs, ys, ax, ay), dmin


def project_point(const double[::1] xs, const double[::1] ys, const double[::1] cum,
                  const double[::1] ex, const double[::1] ey,
                  const double[::1] bx, const double[::1] by,
                  double ax, double ay):
    """Project one Cartesian point; returns (s, d, status)."""
    cdef double s = 0.0
    cdef double d = 0.0
    cdef Py_ssize_t m = _nearest_vertex_c(xs, ys, ax, ay)
    cdef int status = _dispatch_c(xs, ys, cum, ex, ey, bx, by, m, ax, ay, &s, &d)
    return s, d, status


def project_batch(const double[::1] xs, const double[::1] ys, const double[::1] cum,
                  const double[::1] ex, const double[::1] ey,
                  const double[::1] bx, const double[::1] by,
                  const double[::1] pxs, const double[::1] pys):
    """Project many points; returns (ss, ds, status, bad_index)."""
    cdef Py_ssize_t npts = pxs.shape[0]
    ss_arr = np.empty(npts)
    ds_arr = np.empty(npts)
    cdef double[::1] ss = ss_arr
    cdef double[::1] ds = ds_arr
    cdef Py_ssize_t i, m
    cdef int status
    cdef double s = 0.0
    cdef double d = 0.0
    with nogil:
        for i in range(npts):
            m = _nearest_vertex_c(xs, ys, pxs[i], pys[i])
            status = _dispatch_c(xs, ys, cum, ex, ey, bx, by, m,
                                 pxs[i], pys[i], &s, &d)
            if status != _OK:
                with gil:
                    return ss_arr, ds_arr, status, i
            ss[i] = s
            ds[i] = d
    return ss_arr, ds_arr, OK, -1


def scan_project(const double[::1] xs, const double[::1] ys, const double[::1] cum,
                 const double[::1] ex, const double[::1] ey,
                 double ax, double ay, double resolution, double ext, Py_ssize_t n_steps):
    """Dense-station scan; ties resolve to the largest station.  Returns (s, d)."""
    cdef Py_ssize_t n_cum = cum.shape[0]
    cdef Py_ssize_t n_pieces = n_cum - 1
    cdef Py_ssize_t k, lo, hi, mid, j
    cdef double sigma, fx, fy, ddx, ddy, dist
    cdef double dmin = 0.0
    cdef double thresh, s, d
    cdef Py_ssize_t kk = 0
    cdef Py_ssize_t jj = 0
    with nogil:
        for k in range(n_steps):
            sigma = -ext + k * resolution
            lo = 0
            hi = n_cum
            while lo < hi:
                mid = (lo + hi) // 2
                if cum[mid] <= sigma:
                    lo = mid + 1
                else:
                    hi = mid
            j = lo - 1
            if j < 0:
                j = 0
            elif j > n_pieces - 1:
                j = n_pieces - 1
            fx = xs[j] + (sigma - cum[j]) * ex[j]
            fy = ys[j] + (sigma - cum[j]) * ey[j]
            ddx = ax - fx
            ddy = ay - fy
            dist = sqrt(ddx * ddx + ddy * ddy)
            if k == 0 or dist < dmin:
                dmin = dist
        thresh = dmin + _TIE_REL * (1.0 + dmin)
        for k in range(n_steps - 1, -1, -1):
            sigma = -ext + k * resolution
            lo = 0
            hi = n_cum
            while lo < hi:
                mid = (lo + hi) // 2
                if cum[mid] <= sigma:
                    lo = mid + 1
                else:
                    hi = mid
            j = lo - 1
            if j < 0:
                j = 0
            elif j > n_pieces - 1:
                j = n_pieces - 1
            fx = xs[j] + (sigma - cum[j]) * ex[j]
            fy = ys[j] + (sigma - cum[j]) * ey[j]
            ddx = ax - fx
            ddy = ay - fy
            dist = sqrt(ddx * ddx + ddy * ddy)
            if dist <= thresh:
                kk = k
                jj = j
                break
    s = -ext + kk * resolution
    d = ex[jj] * (ay - ys[jj]) - ey[jj] * (ax - xs[jj])
    return s, d


cdef bint _onseg_c(double px, double py, double qx, double qy,
                   double rx, double ry) nogil:
    cdef double xlo = px if px < qx else qx
    cdef double xhi = px if px > qx else qx
    cdef double ylo = py if py < qy else qy
    cdef double yhi = py if py > qy else qy
    return xlo <= rx <= xhi and ylo <= ry <= yhi


def has_self_intersection(const double[::1] xs, const double[::1] ys):
    """Whether any two non-adjacent path segments share a point."""
    cdef Py_ssize_t n_seg = xs.shape[0] - 1
    if n_seg < 3:
        return False
    cdef Py_ssize_t i, j
    cdef double ax, ay, bx, by, cx, cy, dx, dy, o1, o2, o3, o4
    cdef bint hit = False
    with nogil:
        for i in range(n_seg - 2):
            ax = xs[i]
            ay = ys[i]
            bx = xs[i + 1]
            by = ys[i + 1]
            for j in range(i + 2, n_seg):
                cx = xs[j]
                cy = ys[j]
                dx = xs[j + 1]
                dy = ys[j + 1]
                o1 = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
                o2 = (bx - ax) * (dy - ay) - (by - ay) * (dx - ax)
                o3 = (dx - cx) * (ay - cy) - (dy - cy) * (ax - cx)
                o4 = (dx - cx) * (by - cy) - (dy - cy) * (bx - cx)
                if ((o1 > 0) != (o2 > 0) and o1 != 0 and o2 != 0
                        and (o3 > 0) != (o4 > 0) and o3 != 0 and o4 != 0):
                    hit = True
                    break
                if o1 == 0 and _onseg_c(ax, ay, bx, by, cx, cy):
                    hit = True
                    break
                if o2 == 0 and _onseg_c(ax, ay, bx, by, dx, dy):
                    hit = True
                    break
                if o3 == 0 and _onseg_c(cx, cy, dx, dy, ax, ay):
                    hit = True
                    break
                if o4 == 0 and _onseg_c(cx, cy, dx, dy, bx, by):
                    hit = True
                    break
            if hit:
                break
    return bool(hit)


def path_point_min_distance(const double[::1] xs, const double[::1] ys,
                            double px, double py):
    """Minimum distance from a point to a polyline path (clamped segments)."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t i
    cdef double vx, vy, den, wx, wy, t, fx, fy, ddx, ddy, dist
    cdef double dmin = 0.0
    if n < 2:
        ddx = px - xs[0]
        ddy = py - ys[0]
        return sqrt(ddx * ddx + ddy * ddy)
    with nogil:
        for i in range(n - 1):
            vx = xs[i + 1] - xs[i]
            vy = ys[i + 1] - ys[i]
            den = vx * vx + vy * vy
            wx = px - xs[i]
            wy = py - ys[i]
            if den > 0.0:
                t = (wx * vx + wy * vy) / den
            else:
                t = 0.0
            if t < 0.0:
                t = 0.0
            elif t > 1.0:
                t = 1.0
            fx = xs[i] + t * vx
            fy = ys[i] + t * vy
            ddx = px - fx
            ddy = py - fy
            dist = sqrt(ddx * ddx + ddy * ddy)
            if i == 0 or dist < dmin:
                dmin = dist
    return dmin
