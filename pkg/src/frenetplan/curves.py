"""Reference curves, arclength sampling, and the sampled reference polyline.

A reference curve is a smooth planar curve parameterized by arclength s.
The planner never consumes the curve directly: it is sampled into a
RefPolyline (uniform arclength steps) which then serves as the geometric
reference for all Frenet conversions.  Stations on the polyline are
cumulative *chord* lengths; both ends extend as infinite rays.

Conventions: the unit normal is the unit tangent rotated +90 degrees
(counterclockwise), so lateral offsets d are positive on the left of the
direction of travel.  Curvature is signed and positive where the curve
bends toward the +normal side (a counterclockwise arc has kappa = +1/R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .geometry import Vec2

# Sampling validity: spacing * kappa_max must not exceed this.
RHO_SPACING = 0.1
# Maximum turning angle between adjacent polyline pieces, degrees.
MAX_TURN_DEG = 10.0
# Arclength reparameterization tolerance for splines, meters.
ARCLEN_TOL = 1e-8
# Relative tolerance for the uniform-chord check on straight references.
CHORD_REL_TOL = 1e-6


class SamplingError(ValueError):
    """A curve cannot be sampled into a valid polyline at the given spacing."""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.details = details or {}


@dataclass(frozen=True)
class FrenetCoord:
    """Station / lateral offset pair relative to a reference polyline."""

    s: float
    d: float

    def __post_init__(self):
        if not (math.isfinite(self.s) and math.isfinite(self.d)):
            raise ValueError(f"frenet coordinates must be finite, got ({self.s}, {self.d})")


class ReferenceCurve:
    """Base class: arclength-parameterized planar curve."""

    @property
    def length(self) -> float:
        raise NotImplementedError

    def position(self, s: float) -> Vec2:
        raise NotImplementedError

    def tangent(self, s: float) -> Vec2:
        raise NotImplementedError

    def curvature(self, s: float) -> float:
        raise NotImplementedError

    def normal(self, s: float) -> Vec2:
        """Unit normal: tangent rotated +90 degrees."""
        return self.tangent(s).perp()

    def curvature_max(self) -> float:
        """Maximum |curvature| over the whole curve."""
        raise NotImplementedError

    def _check_range(self, s: float) -> float:
        slack = 1e-9 * max(1.0, self.length)
        if s < -slack or s > self.length + slack:
            raise ValueError(f"arclength {s} outside [0, {self.length}]")
        return min(max(s, 0.0), self.length)


class Line(ReferenceCurve):
    """Straight segment from start to end."""

    def __init__(self, start: Vec2, end: Vec2):
        if (end - start).norm() == 0.0:
            raise ValueError("line endpoints must be distinct")
        self.start = start
        self.end = end
        self._dir = (end - start).unit()
        self._length = (end - start).norm()

    @property
    def length(self) -> float:
        return self._length

    def position(self, s: float) -> Vec2:
        s = self._check_range(s)
        return Vec2(self.start.x + s * self._dir.x, self.start.y + s * self._dir.y)

    def tangent(self, s: float) -> Vec2:
        self._check_range(s)
        return self._dir

    def curvature(self, s: float) -> float:
        self._check_range(s)
        return 0.0

    def curvature_max(self) -> float:
        return 0.0


class Arc(ReferenceCurve):
    """Circular arc; positive sweep runs counterclockwise (kappa = +1/R)."""

    def __init__(self, center: Vec2, radius: float, start_angle: float, sweep: float):
        if radius <= 0.0:
            raise ValueError(f"radius must be positive, got {radius}")
        if sweep == 0.0:
            raise ValueError("sweep must be nonzero")
        self.center = center
        self.radius = radius
        self.start_angle = start_angle
        self.sweep = sweep
        self._sign = 1.0 if sweep > 0 else -1.0
        self._length = radius * abs(sweep)

    @property
    def length(self) -> float:
        return self._length

    def _angle(self, s: float) -> float:
        return self.start_angle + self._sign * s / self.radius

    def position(self, s: float) -> Vec2:
        s = self._check_range(s)
        a = self._angle(s)
        return Vec2(self.center.x + self.radius * math.cos(a),
                    self.center.y + self.radius * math.sin(a))

    def tangent(self, s: float) -> Vec2:
        s = self._check_range(s)
        a = self._angle(s)
        return Vec2(-self._sign * math.sin(a), self._sign * math.cos(a))

    def curvature(self, s: float) -> float:
        self._check_range(s)
        return self._sign / self.radius

    def curvature_max(self) -> float:
        return 1.0 / self.radius


class Spline(ReferenceCurve):
    """Natural cubic spline through waypoints, reparameterized by arclength.

    The underlying spline runs over the chord-length parameter; an
    arclength table (Gauss-Legendre quadrature per sub-interval, refined to
    ARCLEN_TOL) maps s to the spline parameter with Newton polish.
    """

    _GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)

    def __init__(self, waypoints: Sequence[Vec2]):
        if len(waypoints) < 3:
            raise ValueError("spline needs at least 3 waypoints")
        pts = np.array([[p.x, p.y] for p in waypoints], dtype=float)
        chords = np.sqrt(np.sum(np.diff(pts, axis=0) ** 2, axis=1))
        if np.any(chords == 0.0):
            raise ValueError("consecutive waypoints must be distinct")
        t = np.concatenate([[0.0], np.cumsum(chords)])
        self._spline = CubicSpline(t, pts, bc_type="natural")
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        self._t_max = t[-1]

        # Arclength lookup table over a refined parameter grid.
        edges = []
        for a, b in zip(t[:-1], t[1:]):
            edges.append(np.linspace(a, b, 17)[:-1])
        t_edges = np.concatenate(edges + [[t[-1]]])
        seg_len = np.array([
            self._quad_arclen(a, b) for a, b in zip(t_edges[:-1], t_edges[1:])
        ])
        self._t_table = t_edges
        self._s_table = np.concatenate([[0.0], np.cumsum(seg_len)])
        self._length = float(self._s_table[-1])

    def _speed(self, t):
        d = self._d1(t)
        return np.sqrt(d[..., 0] ** 2 + d[..., 1] ** 2)

    def _quad_arclen(self, ta: float, tb: float) -> float:
        mid = 0.5 * (ta + tb)
        half = 0.5 * (tb - ta)
        return float(half * np.sum(self._GL_WEIGHTS * self._speed(mid + half * self._GL_NODES)))

    def _s_of_t(self, t: float) -> float:
        i = int(np.searchsorted(self._t_table, t, side="right")) - 1
        i = min(max(i, 0), len(self._t_table) - 2)
        return float(self._s_table[i] + self._quad_arclen(self._t_table[i], t))

    def _t_of_s(self, s: float) -> float:
        t = float(np.interp(s, self._s_table, self._t_table))
        for _ in range(4):
            err = self._s_of_t(t) - s
            if abs(err) <= ARCLEN_TOL:
                break
            t -= err / max(float(self._speed(np.array(t))), 1e-12)
            t = min(max(t, 0.0), self._t_max)
        return t

    @property
    def length(self) -> float:
        return self._length

    def position(self, s: float) -> Vec2:
        s = self._check_range(s)
        p = self._spline(self._t_of_s(s))
        return Vec2(float(p[0]), float(p[1]))

    def tangent(self, s: float) -> Vec2:
        s = self._check_range(s)
        d = self._d1(self._t_of_s(s))
        return Vec2(float(d[0]), float(d[1])).unit()

    def curvature(self, s: float) -> float:
        s = self._check_range(s)
        t = self._t_of_s(s)
        d1 = self._d1(t)
        d2 = self._d2(t)
        num = d1[0] * d2[1] - d1[1] * d2[0]
        den = (d1[0] ** 2 + d1[1] ** 2) ** 1.5
        return float(num / den)

    def curvature_max(self) -> float:
        t = np.linspace(0.0, self._t_max, 4096)
        d1 = self._d1(t)
        d2 = self._d2(t)
        num = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
        den = (d1[:, 0] ** 2 + d1[:, 1] ** 2) ** 1.5
        return float(np.max(np.abs(num / den)))


class CompositeCurve(ReferenceCurve):
    """C1 chain of curve parts with cumulative arclength."""

    def __init__(self, parts: Sequence[ReferenceCurve], tol: float = 1e-9):
        if not parts:
            raise ValueError("composite needs at least one part")
        for prev, nxt in zip(parts[:-1], parts[1:]):
            gap = (nxt.position(0.0) - prev.position(prev.length)).norm()
            if gap > tol * max(1.0, prev.length):
                raise ValueError(f"parts are not C0-continuous (gap {gap:g})")
            tgap = (nxt.tangent(0.0) - prev.tangent(prev.length)).norm()
            if tgap > 1e-9:
                raise ValueError(f"parts are not C1-continuous (tangent gap {tgap:g})")
        self.parts = list(parts)
        self._offsets = np.concatenate([[0.0], np.cumsum([p.length for p in parts])])

    @property
    def length(self) -> float:
        return float(self._offsets[-1])

    def _locate(self, s: float) -> tuple[ReferenceCurve, float]:
        s = self._check_range(s)
        # A station exactly at a joint evaluates on the later part.
        i = int(np.searchsorted(self._offsets, s, side="right")) - 1
        i = min(max(i, 0), len(self.parts) - 1)
        return self.parts[i], s - float(self._offsets[i])

    def position(self, s: float) -> Vec2:
        part, local = self._locate(s)
        return part.position(local)

    def tangent(self, s: float) -> Vec2:
        part, local = self._locate(s)
        return part.tangent(local)

    def curvature(self, s: float) -> float:
        part, local = self._locate(s)
        return part.curvature(local)

    def curvature_max(self) -> float:
        return max(p.curvature_max() for p in self.parts)


class RefPolyline:
    """Uniformly sampled reference polyline with precomputed projection data.

    Stations are cumulative chord lengths starting at 0.  Piece j connects
    vertex j to vertex j+1; stations exactly at a joint evaluate on the
    larger-index piece.  Stations outside [0, total_length] continue on the
    first/last piece extended as an infinite ray.

    strict=True additionally enforces the sampling conditions (uniform
    chords, turning angle, spacing*kappa_max); the projection examples in
    the test-suite build small hand polylines with strict=False.
    """

    def __init__(self, points, spacing: float, kappa_max: float = 0.0, *,
                 source_arclengths=None, sample_curvatures=None, strict: bool = True):
        pts = np.asarray([[p.x, p.y] if isinstance(p, Vec2) else p for p in points],
                         dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValueError("polyline needs at least 2 points of shape (n, 2)")
        if not np.all(np.isfinite(pts)):
            raise ValueError("polyline points must be finite")
        if not (math.isfinite(spacing) and spacing > 0.0):
            raise ValueError(f"spacing must be positive, got {spacing}")
        if not (math.isfinite(kappa_max) and kappa_max >= 0.0):
            raise ValueError(f"kappa_max must be >= 0, got {kappa_max}")

        self.xs = np.ascontiguousarray(pts[:, 0])
        self.ys = np.ascontiguousarray(pts[:, 1])
        dx = np.diff(self.xs)
        dy = np.diff(self.ys)
        chords = np.sqrt(dx * dx + dy * dy)
        if np.any(chords == 0.0):
            i = int(np.argmin(chords))
            raise ValueError(f"consecutive points {i} and {i + 1} coincide")
        self.cumulative_s = np.concatenate([[0.0], np.cumsum(chords)])
        self.chords = chords
        self.ex = np.ascontiguousarray(dx / chords)
        self.ey = np.ascontiguousarray(dy / chords)
        self.spacing = float(spacing)
        self.kappa_max = float(kappa_max)
        self.source_arclengths = (None if source_arclengths is None
                                  else np.asarray(source_arclengths, dtype=float))
        self.sample_curvatures = (None if sample_curvatures is None
                                  else np.asarray(sample_curvatures, dtype=float))

        if strict:
            self._check_sampling_conditions()
        self._bx, self._by = self._compute_bisectors()

    # -- validation ----------------------------------------------------

    def _check_sampling_conditions(self):
        if self.spacing * self.kappa_max > RHO_SPACING * (1.0 + 1e-12):
            raise ValueError(
                f"spacing*kappa_max = {self.spacing * self.kappa_max:g} exceeds {RHO_SPACING}")
        # Uniform chords, allowing the curvature-induced chord shortening
        # (a chord subtending arclength h on curvature kappa is shorter by
        # the factor (h*kappa)^2/24) and excluding the final short interval.
        shrink = (self.spacing * self.kappa_max) ** 2 / 24.0
        lo = self.spacing * (1.0 - shrink - CHORD_REL_TOL)
        hi = self.spacing * (1.0 + CHORD_REL_TOL)
        interior = self.chords[:-1] if len(self.chords) > 1 else self.chords[:0]
        bad = np.nonzero((interior < lo) | (interior > hi))[0]
        if bad.size:
            i = int(bad[0])
            raise ValueError(
                f"chord {i} has length {interior[i]:.9g}, outside the uniform "
                f"band [{lo:.9g}, {hi:.9g}] for spacing {self.spacing:g}")
        if len(self.chords) > 1 and self.chords[-1] > hi:
            raise ValueError(
                f"final chord {self.chords[-1]:.9g} exceeds spacing {self.spacing:g}")
        angles = self.turning_angles_deg()
        bad = np.nonzero(angles > MAX_TURN_DEG + 1e-9)[0]
        if bad.size:
            i = int(bad[0])
            raise ValueError(
                f"turning angle at vertex {i + 1} is {angles[i]:.4f} deg, "
                f"exceeds {MAX_TURN_DEG} deg")

    def turning_angles_deg(self) -> np.ndarray:
        """Turning angle at each interior vertex, degrees."""
        cosang = self.ex[:-1] * self.ex[1:] + self.ey[:-1] * self.ey[1:]
        return np.degrees(np.arccos(np.clip(cosang, -1.0, 1.0)))

    # -- precomputed bisectors ----------------------------------------

    def _compute_bisectors(self):
        """Unit bisector heading at every vertex.

        Interior vertices use the heading of (out_dir - in_dir), which spans
        the angle bisector of the two piece lines (and degenerates to the
        perpendicular for collinear pieces).  End vertices use the
        perpendicular of their single incident piece.
        """
        n = len(self.xs)
        bx = np.empty(n)
        by = np.empty(n)
        bx[0], by[0] = -self.ey[0], self.ex[0]
        bx[-1], by[-1] = -self.ey[-1], self.ex[-1]
        for j in range(1, n - 1):
            dx = self.ex[j] - self.ex[j - 1]
            dy = self.ey[j] - self.ey[j - 1]
            norm = math.sqrt(dx * dx + dy * dy)
            if norm <= 1e-12:
                bx[j], by[j] = -self.ey[j - 1], self.ex[j - 1]
            else:
                bx[j], by[j] = dx / norm, dy / norm
        return np.ascontiguousarray(bx), np.ascontiguousarray(by)

    @property
    def bisector_x(self) -> np.ndarray:
        return self._bx

    @property
    def bisector_y(self) -> np.ndarray:
        return self._by

    # -- basic queries -------------------------------------------------

    @property
    def n_points(self) -> int:
        return len(self.xs)

    @property
    def n_pieces(self) -> int:
        return len(self.xs) - 1

    @property
    def total_length(self) -> float:
        """Total chord length (the station of the last vertex)."""
        return float(self.cumulative_s[-1])

    @property
    def points(self) -> list[Vec2]:
        return [Vec2(float(x), float(y)) for x, y in zip(self.xs, self.ys)]

    def vertex(self, i: int) -> Vec2:
        return Vec2(float(self.xs[i]), float(self.ys[i]))

    def piece_at(self, s: float) -> int:
        """Index of the piece containing station s (rays at both ends)."""
        i = int(np.searchsorted(self.cumulative_s, s, side="right")) - 1
        return min(max(i, 0), self.n_pieces - 1)

    def point_at(self, s: float) -> Vec2:
        """Cartesian point at station s, extending the end pieces as rays."""
        j = self.piece_at(s)
        r = s - float(self.cumulative_s[j])
        return Vec2(float(self.xs[j] + r * self.ex[j]),
                    float(self.ys[j] + r * self.ey[j]))

    def direction_at(self, s: float) -> Vec2:
        return Vec2(float(self.ex[self.piece_at(s)]), float(self.ey[self.piece_at(s)]))

    def normal_at(self, s: float) -> Vec2:
        j = self.piece_at(s)
        return Vec2(float(-self.ey[j]), float(self.ex[j]))

    def to_cartesian(self, coord: FrenetCoord) -> Vec2:
        """Foot point at coord.s offset by coord.d along the piece normal."""
        j = self.piece_at(coord.s)
        r = coord.s - float(self.cumulative_s[j])
        return Vec2(float(self.xs[j] + r * self.ex[j] - coord.d * self.ey[j]),
                    float(self.ys[j] + r * self.ey[j] + coord.d * self.ex[j]))

    def kappa_near(self, s: float) -> float:
        """Curvature of the nearest sample; kappa_max when unknown."""
        if self.sample_curvatures is None:
            return self.kappa_max
        i = int(np.searchsorted(self.cumulative_s, s, side="left"))
        if i > 0 and (i == self.n_points
                      or s - self.cumulative_s[i - 1] < self.cumulative_s[i] - s):
            i -= 1
        return float(self.sample_curvatures[min(i, self.n_points - 1)])

    def kappa_near_batch(self, stations: np.ndarray) -> np.ndarray:
        """Curvature of the nearest sample for each station."""
        stations = np.asarray(stations, dtype=float)
        if self.sample_curvatures is None:
            return np.full(stations.shape, self.kappa_max)
        i = np.searchsorted(self.cumulative_s, stations, side="left")
        i = np.clip(i, 0, self.n_points - 1)
        prev = np.clip(i - 1, 0, self.n_points - 1)
        take_prev = (i > 0) & ((stations - self.cumulative_s[prev])
                               < (self.cumulative_s[i] - stations))
        return self.sample_curvatures[np.where(take_prev, prev, i)]

    def to_cartesian_batch(self, stations: np.ndarray, offsets: np.ndarray,
                           piece_indices: Optional[np.ndarray] = None):
        """Vectorized to_cartesian; returns (xs, ys) arrays.

        piece_indices short-circuits the station->piece lookup when the
        caller already knows it (grid-aligned trajectories).
        """
        stations = np.asarray(stations, dtype=float)
        offsets = np.asarray(offsets, dtype=float)
        if piece_indices is None:
            j = np.searchsorted(self.cumulative_s, stations, side="right") - 1
            j = np.minimum(np.maximum(j, 0), self.n_pieces - 1)
        else:
            j = piece_indices
        r = stations - self.cumulative_s[j]
        xs = self.xs[j] + r * self.ex[j] - offsets * self.ey[j]
        ys = self.ys[j] + r * self.ey[j] + offsets * self.ex[j]
        return xs, ys


def frenet_to_cartesian(polyline: RefPolyline, coord: FrenetCoord) -> Vec2:
    """Cartesian position of a Frenet coordinate on the extended polyline."""
    return polyline.to_cartesian(coord)


def sample_polyline(curve: ReferenceCurve, spacing: float) -> RefPolyline:
    """Sample a curve at uniform arclength steps into a RefPolyline.

    Raises SamplingError when the result would violate the validity
    conditions (spacing*kappa_max <= 0.1, turning angle <= 10 degrees,
    distinct samples).  The final interval may be shorter than spacing so
    the last sample lands exactly on the curve end.
    """
    if not (math.isfinite(spacing) and spacing > 0.0):
        raise SamplingError(f"spacing must be positive, got {spacing}")
    total = curve.length
    kappa_max = curve.curvature_max()

    reasons = []
    details = {"spacing": spacing, "kappa_max": kappa_max}
    if spacing * kappa_max > RHO_SPACING * (1.0 + 1e-12):
        reasons.append(
            f"spacing*kappa_max = {spacing * kappa_max:.6g} exceeds {RHO_SPACING}")
        details["spacing_kappa"] = spacing * kappa_max

    n_whole = int(math.floor(total / spacing))
    while n_whole * spacing > total:
        n_whole -= 1
    stations = [k * spacing for k in range(n_whole + 1)]
    if total - stations[-1] > 1e-9 * max(1.0, total):
        stations.append(total)
    else:
        stations[-1] = total
    if len(stations) < 2:
        raise SamplingError(
            f"spacing {spacing:g} produces fewer than 2 samples on a curve of "
            f"length {total:g}", details)

    pts = [curve.position(s) for s in stations]
    kappas = [curve.curvature(s) for s in stations]

    xs = np.array([p.x for p in pts])
    ys = np.array([p.y for p in pts])
    dx = np.diff(xs)
    dy = np.diff(ys)
    chords = np.sqrt(dx * dx + dy * dy)
    if np.any(chords == 0.0):
        i = int(np.argmin(chords))
        raise SamplingError(f"samples {i} and {i + 1} coincide", details | {"index": i})
    ex, ey = dx / chords, dy / chords
    cosang = np.clip(ex[:-1] * ex[1:] + ey[:-1] * ey[1:], -1.0, 1.0)
    angles = np.degrees(np.arccos(cosang))
    bad = np.nonzero(angles > MAX_TURN_DEG + 1e-9)[0]
    if bad.size:
        i = int(bad[0])
        reasons.append(
            f"turning angle at vertex {i + 1} is {angles[i]:.4f} deg, "
            f"exceeds {MAX_TURN_DEG} deg")
        details["index"] = i + 1
        details["angle_deg"] = float(angles[i])

    if reasons:
        raise SamplingError("; ".join(reasons), details)

    return RefPolyline(pts, spacing, kappa_max,
                       source_arclengths=stations, sample_curvatures=kappas,
                       strict=True)
