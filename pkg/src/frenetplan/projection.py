"""Cartesian -> Frenet projection onto a reference polyline.

The main operator (cartesian_to_frenet) finds the nearest polyline vertex
(ties resolve to the largest index), then routes the query to one of two
sub-transforms: interior vertices project onto the adjacent piece whose
half-space contains the query, through the piece's bisector fan
(fan_project); end vertices project perpendicularly onto the first/last
piece extended as an infinite ray (ray_project).  The construction makes
the projection agree on piece boundaries: a query on a junction bisector
gets the same result from both adjacent pieces.

check_following evaluates how the projected station evolves along a path
and flags reversals (station decreasing) and discontinuities (station
jumps larger than a threshold).  scan_project is the independent
brute-force oracle: a dense station scan over the extended polyline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._kernels import impl as _impl
from . import _kernels_py as _pyimpl
from .curves import FrenetCoord, RefPolyline
from .geometry import Vec2

# Station decreases larger than this flag a reversal (meters).
MONOTONE_EPS = 1e-6
# Default discontinuity threshold, in units of polyline spacing.
JUMP_SPACING_FACTOR = 5.0


class DegenerateFanError(ValueError):
    """Query coincides with (or projects through infinity of) a fan center."""


_STATUS_MESSAGES = {
    1: "query point coincides with the bisector fan center",
    2: "projection ray through the fan center is parallel to the piece line",
}


def _raise_for_status(status: int) -> None:
    if status != 0:
        raise DegenerateFanError(_STATUS_MESSAGES.get(status, f"status {status}"))


def _xy(p) -> tuple[float, float]:
    if isinstance(p, Vec2):
        return p.x, p.y
    x, y = p
    return float(x), float(y)


@dataclass(frozen=True)
class NearestSet:
    """Vertices within the tie band of the minimum query distance."""

    indices: tuple[int, ...]
    min_distance: float

    def __post_init__(self):
        if not self.indices:
            raise ValueError("nearest set cannot be empty")
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("indices must be strictly increasing")

    @property
    def chosen(self) -> int:
        """The index the projection dispatches on (largest in the set)."""
        return self.indices[-1]


@dataclass(frozen=True)
class FollowingReport:
    """Per-sample projected stations of a path and the derived flags."""

    stations: np.ndarray
    lateral_offsets: np.ndarray
    jump_threshold: float
    monotone_eps: float = MONOTONE_EPS
    reversal_detected: bool = field(init=False, default=False)
    discontinuity_detected: bool = field(init=False, default=False)

    def __post_init__(self):
        delta = np.diff(self.stations)
        object.__setattr__(self, "reversal_detected",
                           bool(np.any(delta < -self.monotone_eps)))
        object.__setattr__(self, "discontinuity_detected",
                           bool(np.any(np.abs(delta) > self.jump_threshold)))

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.stations)

    @property
    def increment_signs(self) -> np.ndarray:
        """Sign of the station increment at each step (the ds/dt sign)."""
        return np.sign(self.increments)

    @property
    def max_jump(self) -> float:
        inc = self.increments
        return float(np.max(np.abs(inc))) if inc.size else 0.0

    @property
    def min_increment(self) -> float:
        inc = self.increments
        return float(np.min(inc)) if inc.size else 0.0


def nearest_vertices(polyline: RefPolyline, p) -> NearestSet:
    """All vertices tied (within the relative band) for minimum distance."""
    ax, ay = _xy(p)
    dx = polyline.xs - ax
    dy = polyline.ys - ay
    dist = np.sqrt(dx * dx + dy * dy)
    dmin = float(dist.min())
    thresh = dmin + 1e-9 * (1.0 + dmin)
    idx = np.nonzero(dist <= thresh)[0]
    return NearestSet(tuple(int(i) for i in idx), dmin)


def cartesian_to_frenet(polyline: RefPolyline, p) -> FrenetCoord:
    """Project a Cartesian point to (station, signed lateral offset).

    Total on finite inputs except for the degenerate fan-center
    configurations (DegenerateFanError), which lie far outside the
    kappa*|d| < 1 operating band.
    """
    ax, ay = _xy(p)
    s, d, status = _impl.project_point(
        polyline.xs, polyline.ys, polyline.cumulative_s,
        polyline.ex, polyline.ey,
        polyline.bisector_x, polyline.bisector_y, ax, ay)
    _raise_for_status(status)
    return FrenetCoord(float(s), float(d))


def fan_project(polyline: RefPolyline, piece: int, p) -> FrenetCoord:
    """Project onto a given piece through its bisector fan center.

    piece is the 0-based piece index (vertices piece and piece+1 are its
    junctions).  Parallel bisectors reduce to the perpendicular transform.
    """
    if not 0 <= piece < polyline.n_pieces:
        raise IndexError(f"piece {piece} out of range [0, {polyline.n_pieces})")
    ax, ay = _xy(p)
    s, d, status = _pyimpl.fan_transform(
        polyline.xs, polyline.ys, polyline.cumulative_s,
        polyline.ex, polyline.ey,
        polyline.bisector_x, polyline.bisector_y, piece, ax, ay)
    _raise_for_status(status)
    return FrenetCoord(float(s), float(d))


def ray_project(polyline: RefPolyline, piece: int, p) -> FrenetCoord:
    """Perpendicular projection onto a piece extended to an infinite line."""
    if not 0 <= piece < polyline.n_pieces:
        raise IndexError(f"piece {piece} out of range [0, {polyline.n_pieces})")
    ax, ay = _xy(p)
    s, d, _ = _pyimpl.ray_transform(
        polyline.xs, polyline.ys, polyline.cumulative_s,
        polyline.ex, polyline.ey, piece, ax, ay)
    return FrenetCoord(float(s), float(d))


def _path_arrays(path) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(path, np.ndarray):
        arr = np.asarray(path, dtype=float)
        return np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1])
    if (isinstance(path, tuple) and len(path) == 2
            and isinstance(path[0], np.ndarray)):
        return (np.ascontiguousarray(np.asarray(path[0], dtype=float)),
                np.ascontiguousarray(np.asarray(path[1], dtype=float)))
    xs = np.array([_xy(p)[0] for p in path], dtype=float)
    ys = np.array([_xy(p)[1] for p in path], dtype=float)
    return xs, ys


def project_path(polyline: RefPolyline, path) -> tuple[np.ndarray, np.ndarray]:
    """Project a sequence of Cartesian points; returns (stations, offsets)."""
    pxs, pys = _path_arrays(path)
    ss, ds, status, bad = _impl.project_batch(
        polyline.xs, polyline.ys, polyline.cumulative_s,
        polyline.ex, polyline.ey,
        polyline.bisector_x, polyline.bisector_y, pxs, pys)
    if status != 0:
        raise DegenerateFanError(
            f"{_STATUS_MESSAGES.get(status, f'status {status}')} (path point {bad})")
    return ss, ds


def check_following(polyline: RefPolyline, path,
                    jump_threshold: Optional[float] = None,
                    monotone_eps: float = MONOTONE_EPS) -> FollowingReport:
    """Project a path and report station reversals/discontinuities.

    The path is taken in traversal order; a reversal means the projected
    station decreases by more than monotone_eps between consecutive
    samples while the path itself advances.  jump_threshold defaults to
    JUMP_SPACING_FACTOR * polyline.spacing.
    """
    if jump_threshold is None:
        jump_threshold = JUMP_SPACING_FACTOR * polyline.spacing
    ss, ds = project_path(polyline, path)
    return FollowingReport(ss, ds, float(jump_threshold), monotone_eps)


def scan_project(polyline: RefPolyline, p, resolution: float,
                 extension: Optional[float] = None) -> FrenetCoord:
    """Brute-force projection: dense station scan over the extended polyline.

    Independent oracle for cartesian_to_frenet: evaluates the foot point at
    every station -ext + k*resolution and keeps the distance-minimizing
    station (largest station on ties).  The default extension adapts to
    the query: 10 * (nearest-vertex distance + spacing), which always
    covers 10x the lateral offset.
    """
    if resolution <= 0.0:
        raise ValueError(f"resolution must be positive, got {resolution}")
    ax, ay = _xy(p)
    if extension is None:
        dx = polyline.xs - ax
        dy = polyline.ys - ay
        dmin = float(np.sqrt(dx * dx + dy * dy).min())
        extension = 10.0 * (dmin + polyline.spacing)
    n_steps = int(np.floor((polyline.total_length + 2.0 * extension) / resolution)) + 1
    s, d = _impl.scan_project(
        polyline.xs, polyline.ys, polyline.cumulative_s,
        polyline.ex, polyline.ey, ax, ay,
        float(resolution), float(extension), n_steps)
    return FrenetCoord(float(s), float(d))
