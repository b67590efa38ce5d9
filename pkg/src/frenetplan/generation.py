"""Corridor-bounded trajectory generation and repair.

Candidates are drawn in Frenet coordinates over a window of reference
stations: one uniform lateral offset per station, clipped to a per-station
corridor.  Because a polyline frame is only a local chart, a drawn candidate
can be geometrically invalid where ``kappa * d`` approaches 1 (the rendered
path stalls or doubles back).  ``repair_trajectory`` re-projects exactly the
offending points and drops any successors they overtake, trading station
coverage for a usable path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional

import numpy as np

from ._kernels import impl as _impl
from .curves import FrenetCoord, ReferenceCurve, RefPolyline
from .projection import FollowingReport, cartesian_to_frenet, check_following


@dataclass(frozen=True)
class CorridorBounds:
    """Per-station lateral bounds [lower, upper], aligned with a polyline."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.ndim != 1 or lower.shape != upper.shape:
            raise ValueError("corridor bounds must be 1-d arrays of equal length")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ValueError("corridor bounds must be finite")
        if np.any(lower > upper):
            bad = int(np.argmax(lower > upper))
            raise ValueError(
                "corridor lower bound exceeds upper bound at index %d "
                "(%g > %g)" % (bad, lower[bad], upper[bad]))

    def __len__(self) -> int:
        return self.lower.shape[0]

    @classmethod
    def constant(cls, n: int, lo: float, hi: float) -> "CorridorBounds":
        return cls(np.full(n, float(lo)), np.full(n, float(hi)))

    def window(self, start: int, count: int) -> "CorridorBounds":
        return CorridorBounds(self.lower[start:start + count],
                              self.upper[start:start + count])


@dataclass(frozen=True)
class CandidateTrajectory:
    """A Frenet-space trajectory: stations with one lateral offset each.

    ``start_index`` is the polyline sample index of the first station.  For
    baseline candidates every station coincides with a polyline sample
    (``grid_aligned``); after repair the stations may be a subsequence with
    re-projected replacements, so only the window anchor is retained.
    """

    stations: np.ndarray
    offsets: np.ndarray
    provenance: str
    seed: int
    start_index: int = 0
    grid_aligned: bool = False

    def __post_init__(self):
        stations = np.asarray(self.stations, dtype=float)
        offsets = np.asarray(self.offsets, dtype=float)
        object.__setattr__(self, "stations", stations)
        object.__setattr__(self, "offsets", offsets)
        if stations.ndim != 1 or stations.shape != offsets.shape:
            raise ValueError("stations and offsets must be 1-d and equally long")
        if stations.shape[0] < 1:
            raise ValueError("a trajectory needs at least one point")
        if self.provenance not in ("baseline", "repaired"):
            raise ValueError("unknown provenance %r" % (self.provenance,))

    def __len__(self) -> int:
        return self.stations.shape[0]

    @property
    def points(self) -> List[FrenetCoord]:
        return [FrenetCoord(float(s), float(d))
                for s, d in zip(self.stations, self.offsets)]

    def sample_indices(self, polyline: RefPolyline) -> np.ndarray:
        """Nearest polyline sample index per point (exact when grid-aligned)."""
        if self.grid_aligned:
            return np.arange(self.start_index, self.start_index + len(self))
        cum = polyline.cumulative_s
        i = np.searchsorted(cum, self.stations, side="left")
        i = np.minimum(np.maximum(i, 0), polyline.n_points - 1)
        prev = np.maximum(i - 1, 0)
        take_prev = (i > 0) & ((self.stations - cum[prev]) < (cum[i] - self.stations))
        return np.where(take_prev, prev, i)

    def render(self, polyline: RefPolyline):
        """Cartesian (xs, ys) of the trajectory on the given reference."""
        if self.grid_aligned:
            idx = np.arange(self.start_index, self.start_index + len(self))
            pieces = np.minimum(idx, polyline.n_pieces - 1)
            return polyline.to_cartesian_batch(self.stations, self.offsets,
                                               piece_indices=pieces)
        return polyline.to_cartesian_batch(self.stations, self.offsets)


def generate_baseline(polyline: RefPolyline, bounds: CorridorBounds, seed: int,
                      start: int = 0, count: Optional[int] = None,
                      ) -> CandidateTrajectory:
    """Draw one corridor-bounded candidate over a station window.

    Offsets are sampled uniformly per station, in station order, from a
    PCG64 generator seeded with ``seed``; the stations themselves are the
    polyline's own, so a [0, 0] corridor reproduces the reference exactly.
    """
    n = polyline.n_points
    if len(bounds) != n:
        raise ValueError("corridor has %d entries for %d polyline points"
                         % (len(bounds), n))
    if count is None:
        count = n - start
    if start < 0 or count < 2 or start + count > n:
        raise ValueError("invalid station window start=%d count=%s" % (start, count))

    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(count)
    lo = bounds.lower[start:start + count]
    hi = bounds.upper[start:start + count]
    offsets = lo + (hi - lo) * u
    stations = polyline.cumulative_s[start:start + count].copy()
    return CandidateTrajectory(stations, offsets, "baseline", seed, start,
                               grid_aligned=True)


def _kappa_for_samples(curve: Optional[ReferenceCurve], polyline: RefPolyline,
                       indices: np.ndarray) -> np.ndarray:
    """Reference curvature at the given polyline sample indices.

    Sampled curvatures are cached on the polyline at the source arc lengths
    (chord station != curve arc length, so the cache is the honest lookup).
    Without a cache, fall back to querying the curve at the clamped station,
    or to the worst-case bound when no curve is available either.
    """
    if polyline.sample_curvatures is not None:
        return polyline.sample_curvatures[indices]
    if curve is not None:
        smax = curve.length
        return np.array([curve.curvature(min(max(float(polyline.cumulative_s[i]),
                                                 0.0), smax))
                         for i in indices])
    return np.full(indices.shape, polyline.kappa_max)


def repair_trajectory(curve: Optional[ReferenceCurve], polyline: RefPolyline,
                      trajectory: CandidateTrajectory) -> CandidateTrajectory:
    """Fix points that break the frame validity condition ``kappa * d < 1``.

    Walk the trajectory in order.  Points satisfying the signed condition are
    kept bitwise.  A violating point is rendered to Cartesian and projected
    back, which normally lands it further down the reference; every
    subsequent input point whose station the landing has already passed is
    dropped, so the output keeps strictly increasing stations (at the cost
    of coverage).  A landing that falls behind an already-emitted point --
    possible when the violating point renders near a bend's center of
    curvature, where the nearest-vertex choice is essentially arbitrary --
    is discarded outright for the same reason.
    """
    n = len(trajectory)
    indices = trajectory.start_index + np.arange(n)
    kappas = _kappa_for_samples(curve, polyline, indices)
    if np.all(kappas * trajectory.offsets < 1.0):
        return CandidateTrajectory(trajectory.stations.copy(),
                                   trajectory.offsets.copy(), "repaired",
                                   trajectory.seed, trajectory.start_index,
                                   grid_aligned=trajectory.grid_aligned)

    out_s: List[float] = []
    out_d: List[float] = []
    i = 0
    while i < n:
        s_i = float(trajectory.stations[i])
        d_i = float(trajectory.offsets[i])
        if float(kappas[i]) * d_i < 1.0:
            out_s.append(s_i)
            out_d.append(d_i)
            i += 1
            continue
        landing = cartesian_to_frenet(
            polyline, polyline.to_cartesian(FrenetCoord(s_i, d_i)))
        if out_s and landing.s <= out_s[-1]:
            i += 1
            continue
        out_s.append(landing.s)
        out_d.append(landing.d)
        j = i + 1
        while j < n and float(trajectory.stations[j]) <= landing.s:
            j += 1
        i = j

    return CandidateTrajectory(np.array(out_s), np.array(out_d), "repaired",
                               trajectory.seed, trajectory.start_index)


@dataclass(frozen=True)
class CandidateValidation:
    """Geometric health report for one candidate's rendered path."""

    monotone: bool
    self_intersecting: bool
    max_kappa_d: float
    following: FollowingReport

    @property
    def anomalous(self) -> bool:
        # Discontinuities are reported via `following` but do not fail a
        # candidate on their own: repaired trajectories jump by design.
        return ((not self.monotone) or self.self_intersecting
                or self.following.reversal_detected)


def validate_candidate(polyline: RefPolyline, trajectory: CandidateTrajectory,
                       rendered=None) -> CandidateValidation:
    """Render a candidate and check it for reversal-style anomalies.

    ``rendered`` may carry a precomputed (xs, ys) pair to avoid rendering
    twice when the caller also needs the Cartesian path.
    """
    ss = trajectory.stations
    n = ss.shape[0]
    monotone = bool(np.all(np.diff(ss) > 0.0)) if n > 1 else True
    if rendered is None:
        rendered = trajectory.render(polyline)
    xs, ys = rendered
    selfx = bool(_impl.has_self_intersection(xs, ys)) if n > 2 else False
    if polyline.sample_curvatures is not None:
        kappas = polyline.sample_curvatures[trajectory.sample_indices(polyline)]
    else:
        kappas = np.full(n, polyline.kappa_max)
    max_kd = float(np.max(kappas * trajectory.offsets))
    following = check_following(polyline, (xs, ys))
    return CandidateValidation(monotone, selfx, max_kd, following)
