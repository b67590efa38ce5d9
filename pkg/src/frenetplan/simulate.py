"""Receding-horizon replanning over corridor-sampled candidates.

Each tick the simulator projects the point agent onto the reference
polyline, draws a batch of corridor-bounded candidates over a forward
station window, optionally repairs them, scores them, and advances the
agent a fixed number of points along the cheapest one.  All randomness
flows from the scenario's base seed, so a trace is replayable bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ._kernels import impl as _impl
from .curves import ReferenceCurve, RefPolyline, sample_polyline
from .generation import (CandidateTrajectory, CandidateValidation,
                         CorridorBounds, generate_baseline, repair_trajectory,
                         validate_candidate)
from .geometry import Vec2
from .projection import cartesian_to_frenet


class InfeasibleCorridorError(ValueError):
    """The obstacle leaves no free lateral gap at some stations."""

    def __init__(self, station_indices):
        self.station_indices = list(station_indices)
        shown = ", ".join(str(i) for i in self.station_indices[:8])
        if len(self.station_indices) > 8:
            shown += ", ..."
        super().__init__("corridor empty at %d station(s): %s"
                         % (len(self.station_indices), shown))


class NoFeasibleCandidate(RuntimeError):
    """Every candidate in a planning batch scored infinite."""

    def __init__(self, tick: int, diagnostics: Dict[str, int]):
        self.tick = tick
        self.diagnostics = dict(diagnostics)
        super().__init__("no feasible candidate at tick %d (%s)"
                         % (tick, diagnostics))


@dataclass(frozen=True)
class Disc:
    """Static circular obstacle."""

    center: Vec2
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError("obstacle radius must be positive and finite")


@dataclass(frozen=True)
class PlannerParams:
    num_candidates: int = 64
    horizon_stations: int = 40
    replan_stride: int = 5
    weight_smoothness: float = 1.0
    weight_centering: float = 0.1
    weight_bounds: float = 100.0
    max_ticks: int = 200

    def __post_init__(self):
        if self.num_candidates < 1:
            raise ValueError("num_candidates must be >= 1")
        if self.horizon_stations < 2:
            raise ValueError("horizon_stations must be >= 2")
        if self.replan_stride < 1:
            raise ValueError("replan_stride must be >= 1")
        if self.max_ticks < 1:
            raise ValueError("max_ticks must be >= 1")
        for name in ("weight_smoothness", "weight_centering", "weight_bounds"):
            if getattr(self, name) < 0.0:
                raise ValueError("%s must be non-negative" % name)

    @property
    def weights(self) -> Tuple[float, float, float]:
        return (self.weight_smoothness, self.weight_centering, self.weight_bounds)


@dataclass
class AgentState:
    position: Vec2
    heading: float
    station: float = 0.0


@dataclass
class Scenario:
    """A reference curve plus corridor, obstacle, agent and planner knobs."""

    name: str
    reference: ReferenceCurve
    spacing: float = 0.5
    corridor_lower: float = -6.0
    corridor_upper: float = 6.0
    obstacle: Optional[Disc] = None
    clearance: float = 0.5
    agent_start: Vec2 = Vec2(0.0, 0.0)
    agent_heading: float = 0.0
    goal_station: Optional[float] = None
    planner: PlannerParams = field(default_factory=PlannerParams)
    base_seed: int = 0
    # Extra corridor width on the inside of bends only (None = no widening).
    # Widening the whole route instead would let samples on one straight of a
    # U-shaped road fall closer to the opposite straight, where the global
    # nearest-point projection rightly captures them.
    inner_widening: Optional[float] = None

    def __post_init__(self):
        if self.spacing <= 0.0:
            raise ValueError("spacing must be positive")
        if self.corridor_lower > self.corridor_upper:
            raise ValueError("corridor_lower exceeds corridor_upper")
        if self.clearance < 0.0:
            raise ValueError("clearance must be non-negative")
        self._polyline: Optional[RefPolyline] = None

    def polyline(self) -> RefPolyline:
        """Sample (and cache) the reference at the configured spacing."""
        if self._polyline is None:
            self._polyline = sample_polyline(self.reference, self.spacing)
        return self._polyline

    def resolved_goal(self, polyline: RefPolyline) -> float:
        if self.goal_station is not None:
            return self.goal_station
        return polyline.total_length - 2.0


def build_corridor(scenario: Scenario, polyline: RefPolyline) -> CorridorBounds:
    """Lateral bounds per station, carved around the inflated obstacle.

    At each station the corridor starts as [corridor_lower, corridor_upper].
    Where the station's lateral slice cuts the obstacle disc (inflated by the
    agent clearance) the blocked sub-interval is removed and the larger of
    the two remaining gaps is kept; a lower-side tie keeps the lower gap.
    """
    n = polyline.n_points
    lo = np.full(n, float(scenario.corridor_lower))
    hi = np.full(n, float(scenario.corridor_upper))
    if (scenario.inner_widening is not None
            and polyline.sample_curvatures is not None):
        kap = polyline.sample_curvatures
        wide = float(scenario.inner_widening)
        hi = np.where(kap > 1e-9, np.maximum(hi, wide), hi)
        lo = np.where(kap < -1e-9, np.minimum(lo, -wide), lo)
    obs = scenario.obstacle
    if obs is None:
        return CorridorBounds(lo, hi)

    r = obs.radius + scenario.clearance
    # Per-vertex frame: the outgoing piece direction (last vertex reuses the
    # final piece, matching the station->piece convention).
    j = np.minimum(np.arange(n), polyline.n_pieces - 1)
    ex = polyline.ex[j]
    ey = polyline.ey[j]
    relx = obs.center.x - polyline.xs
    rely = obs.center.y - polyline.ys
    u = relx * ex + rely * ey          # longitudinal offset of the center
    v = ex * rely - ey * relx          # lateral offset of the center
    hit = np.abs(u) <= r
    if not np.any(hit):
        return CorridorBounds(lo, hi)

    h = np.zeros(n)
    h[hit] = np.sqrt(r * r - u[hit] * u[hit])
    blocked_lo = v - h
    blocked_hi = v + h
    low_gap_hi = np.minimum(hi, blocked_lo)
    high_gap_lo = np.maximum(lo, blocked_hi)
    low_len = low_gap_hi - lo
    high_len = hi - high_gap_lo

    infeasible = hit & (low_len < 0.0) & (high_len < 0.0)
    if np.any(infeasible):
        raise InfeasibleCorridorError(np.nonzero(infeasible)[0].tolist())

    keep_low = hit & (low_len >= high_len)
    keep_high = hit & ~keep_low
    hi = np.where(keep_low, low_gap_hi, hi)
    lo = np.where(keep_high, high_gap_lo, lo)
    return CorridorBounds(lo, hi)


def _score_arrays(offsets: np.ndarray, xs: np.ndarray, ys: np.ndarray,
                  lo: np.ndarray, hi: np.ndarray, obstacle: Optional[Disc],
                  clearance: float, w1: float, w2: float, w3: float,
                  ) -> Tuple[float, bool]:
    """Cost of a rendered candidate; returns (cost, collision)."""
    if obstacle is not None:
        dist = _impl.path_point_min_distance(xs, ys, obstacle.center.x,
                                             obstacle.center.y)
        if dist < obstacle.radius + clearance:
            return math.inf, True
    smooth = float(np.sum(np.abs(np.diff(offsets)))) if offsets.shape[0] > 1 else 0.0
    centering = float(np.sum(offsets * offsets))
    overshoot = (np.maximum(0.0, lo - offsets)
                 + np.maximum(0.0, offsets - hi))
    return w1 * smooth + w2 * centering + w3 * float(np.sum(overshoot)), False


def score_candidate(trajectory: CandidateTrajectory, corridor: CorridorBounds,
                    validation: Optional[CandidateValidation] = None, *,
                    polyline: RefPolyline, obstacle: Optional[Disc] = None,
                    clearance: float = 0.0,
                    weights: Tuple[float, float, float] = (1.0, 0.1, 100.0),
                    ) -> float:
    """Candidate cost: smoothness + centerline adherence + bound overshoot.

    Collision with the inflated obstacle makes the cost infinite.  The
    validation report is accepted for signature symmetry with the planner;
    anomaly flags are recorded in diagnostics rather than priced in.
    """
    del validation
    xs, ys = trajectory.render(polyline)
    idx = trajectory.sample_indices(polyline)
    cost, _ = _score_arrays(trajectory.offsets, xs, ys,
                            corridor.lower[idx], corridor.upper[idx],
                            obstacle, clearance, *weights)
    return cost


@dataclass(frozen=True)
class CandidateSummary:
    seed: int
    cost: float
    monotone: bool
    self_intersecting: bool
    reversal: bool
    discontinuity: bool
    collision: bool
    max_kappa_d: float
    n_points: int

    @property
    def anomalous(self) -> bool:
        return (not self.monotone) or self.self_intersecting or self.reversal


@dataclass
class PlanStepResult:
    selected: CandidateTrajectory
    selected_xs: np.ndarray
    selected_ys: np.ndarray
    selected_summary: CandidateSummary
    summaries: List[CandidateSummary]
    diagnostics: Dict[str, int]


def _diagnostics(summaries: List[CandidateSummary]) -> Dict[str, int]:
    return {
        "candidates": len(summaries),
        "reversal": sum(1 for s in summaries if s.reversal),
        "self_intersection": sum(1 for s in summaries if s.self_intersecting),
        "non_monotone": sum(1 for s in summaries if not s.monotone),
        "discontinuity": sum(1 for s in summaries if s.discontinuity),
        "collision": sum(1 for s in summaries if s.collision),
    }


def plan_step(scenario: Scenario, polyline: RefPolyline, agent: AgentState,
              use_repair: bool, corridor: Optional[CorridorBounds] = None,
              tick: int = 0) -> PlanStepResult:
    """One planning batch from the agent's current station.

    Candidate k draws its seed as base_seed + k + tick * num_candidates so
    streams never overlap across ticks.  Selection is pure argmin cost with
    ties broken by the smaller seed.
    """
    if corridor is None:
        corridor = build_corridor(scenario, polyline)
    params = scenario.planner
    n = polyline.n_points
    start = int(np.searchsorted(polyline.cumulative_s, agent.station - 1e-9,
                                side="left"))
    start = min(max(start, 0), n - 2)
    count = min(params.horizon_stations, n - start)

    best: Optional[CandidateTrajectory] = None
    best_summary: Optional[CandidateSummary] = None
    best_render: Optional[Tuple[np.ndarray, np.ndarray]] = None
    best_cost = math.inf
    summaries: List[CandidateSummary] = []

    for k in range(params.num_candidates):
        seed = scenario.base_seed + k + tick * params.num_candidates
        cand = generate_baseline(polyline, corridor, seed, start, count)
        if use_repair:
            cand = repair_trajectory(scenario.reference, polyline, cand)
        xs, ys = cand.render(polyline)
        val = validate_candidate(polyline, cand, rendered=(xs, ys))
        idx = cand.sample_indices(polyline)
        cost, collided = _score_arrays(
            cand.offsets, xs, ys, corridor.lower[idx], corridor.upper[idx],
            scenario.obstacle, scenario.clearance, params.weight_smoothness,
            params.weight_centering, params.weight_bounds)
        summary = CandidateSummary(
            seed, cost, val.monotone, val.self_intersecting,
            val.following.reversal_detected,
            val.following.discontinuity_detected, collided,
            val.max_kappa_d, len(cand))
        summaries.append(summary)
        if cost < best_cost:
            best, best_summary, best_render, best_cost = cand, summary, (xs, ys), cost

    diagnostics = _diagnostics(summaries)
    if best is None or best_summary is None or best_render is None:
        raise NoFeasibleCandidate(tick, diagnostics)
    return PlanStepResult(best, best_render[0], best_render[1], best_summary,
                          summaries, diagnostics)


@dataclass
class TickRecord:
    tick: int
    agent_x: float
    agent_y: float
    agent_heading: float
    agent_station: float
    selected: CandidateTrajectory
    selected_xs: np.ndarray
    selected_ys: np.ndarray
    selected_summary: CandidateSummary
    candidates: List[CandidateSummary]
    diagnostics: Dict[str, int]


@dataclass
class PlanTrace:
    scenario_name: str
    mode: str
    base_seed: int
    goal_station: float
    goal_reached: bool
    final_station: float
    records: List[TickRecord]

    @property
    def n_ticks(self) -> int:
        return len(self.records)

    @property
    def anomalous_selected_count(self) -> int:
        return sum(1 for r in self.records if r.selected_summary.anomalous)

    def diagnostics_total(self, key: str) -> int:
        return sum(r.diagnostics.get(key, 0) for r in self.records)


def run_simulation(scenario: Scenario, use_repair: bool,
                   max_ticks: Optional[int] = None) -> PlanTrace:
    """Replanning loop: plan, advance replan_stride points, repeat.

    Stops when the agent's projected station reaches the goal or the tick
    budget runs out (goal_reached False in that case).  NoFeasibleCandidate
    propagates with the tick at which planning failed.
    """
    polyline = scenario.polyline()
    corridor = build_corridor(scenario, polyline)
    goal = scenario.resolved_goal(polyline)
    limit = scenario.planner.max_ticks if max_ticks is None else max_ticks
    stride = scenario.planner.replan_stride

    pos = scenario.agent_start
    heading = scenario.agent_heading
    station = cartesian_to_frenet(polyline, pos).s
    records: List[TickRecord] = []
    goal_reached = False
    tick = 0
    while True:
        if station >= goal:
            goal_reached = True
            break
        if tick >= limit:
            break
        step = plan_step(scenario, polyline, AgentState(pos, heading, station),
                         use_repair, corridor=corridor, tick=tick)
        records.append(TickRecord(
            tick, pos.x, pos.y, heading, station, step.selected,
            step.selected_xs, step.selected_ys, step.selected_summary,
            step.summaries, step.diagnostics))
        idx = min(stride, len(step.selected) - 1)
        nx = float(step.selected_xs[idx])
        ny = float(step.selected_ys[idx])
        if idx > 0:
            dx = nx - float(step.selected_xs[idx - 1])
            dy = ny - float(step.selected_ys[idx - 1])
            if dx != 0.0 or dy != 0.0:
                heading = math.atan2(dy, dx)
        pos = Vec2(nx, ny)
        station = cartesian_to_frenet(polyline, pos).s
        tick += 1

    mode = "repaired" if use_repair else "baseline"
    return PlanTrace(scenario.name, mode, scenario.base_seed, goal,
                     goal_reached, station, records)
