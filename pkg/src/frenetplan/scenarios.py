"""Bundled scenarios with pinned geometry and planner defaults.

"straight" is a smoke scenario; "u_road" is the lane-scale U-shaped road
with an obstacle past the bend apex; "u_road_wide" widens the corridor far
to the inner side of the bend so that corridor sampling can produce
reversing/self-crossing candidates; "fig3b" is a bare semicircle used by
the projection counterexample tests.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, Optional

from .curves import Arc, CompositeCurve, Line
from .geometry import Vec2
from .simulate import Disc, PlannerParams, Scenario

_ARC_RADIUS = 15.0
_STRAIGHT_LEN = 30.0
_SPACING = 0.5


def _u_road_curve() -> CompositeCurve:
    return CompositeCurve([
        Line(Vec2(0.0, 0.0), Vec2(_STRAIGHT_LEN, 0.0)),
        Arc(Vec2(_STRAIGHT_LEN, _ARC_RADIUS), _ARC_RADIUS,
            -math.pi / 2.0, math.pi),
        Line(Vec2(_STRAIGHT_LEN, 2.0 * _ARC_RADIUS), Vec2(0.0, 2.0 * _ARC_RADIUS)),
    ])


def _u_road_obstacle() -> Disc:
    # Two meters to the inner side of the bend apex (apex at (45, 15),
    # inward normal (-1, 0)).
    return Disc(Vec2(_STRAIGHT_LEN + _ARC_RADIUS - 2.0, _ARC_RADIUS), 1.5)


def straight_scenario(base_seed: int = 0) -> Scenario:
    return Scenario(
        name="straight",
        reference=Line(Vec2(0.0, 0.0), Vec2(100.0, 0.0)),
        spacing=_SPACING,
        corridor_lower=-6.0,
        corridor_upper=6.0,
        obstacle=None,
        agent_start=Vec2(0.0, 0.0),
        agent_heading=0.0,
        planner=PlannerParams(),
        base_seed=base_seed,
    )


def u_road_scenario(base_seed: int = 0) -> Scenario:
    return Scenario(
        name="u_road",
        reference=_u_road_curve(),
        spacing=_SPACING,
        corridor_lower=-6.0,
        corridor_upper=6.0,
        obstacle=_u_road_obstacle(),
        clearance=0.5,
        agent_start=Vec2(0.0, 0.0),
        agent_heading=0.0,
        planner=PlannerParams(),
        base_seed=base_seed,
    )


def u_road_wide_scenario(base_seed: int = 0) -> Scenario:
    scenario = u_road_scenario(base_seed)
    scenario.name = "u_road_wide"
    # Widened only toward the bend's inner side: offsets up to 20 m against
    # a 15 m arc radius let sampled candidates break the frame condition.
    scenario.inner_widening = 20.0
    return scenario


def fig3b_scenario(base_seed: int = 0) -> Scenario:
    return Scenario(
        name="fig3b",
        reference=Arc(Vec2(0.0, 0.0), 10.0, 0.0, math.pi),
        spacing=_SPACING,
        corridor_lower=-6.0,
        corridor_upper=6.0,
        obstacle=None,
        agent_start=Vec2(10.0, 0.0),
        agent_heading=math.pi / 2.0,
        planner=PlannerParams(),
        base_seed=base_seed,
    )


BUNDLED: Dict[str, Callable[[int], Scenario]] = {
    "straight": straight_scenario,
    "u_road": u_road_scenario,
    "u_road_wide": u_road_wide_scenario,
    "fig3b": fig3b_scenario,
}


def bundled_scenario(name: str, base_seed: Optional[int] = None) -> Scenario:
    try:
        factory = BUNDLED[name]
    except KeyError:
        raise ValueError("unknown scenario %r (bundled: %s)"
                         % (name, ", ".join(sorted(BUNDLED)))) from None
    return factory(0 if base_seed is None else base_seed)
