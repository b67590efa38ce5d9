"""Run configuration: YAML parsing and validation for the CLI.

A config names a bundled scenario or describes one inline (curve parts,
corridor, obstacle, planner parameters).  Parsing is eager: the reference
curve is built and sampled immediately so geometry errors surface with the
offending values at parse time, not mid-run.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional

import yaml

from .curves import Arc, CompositeCurve, Line, ReferenceCurve, Spline
from .geometry import Vec2
from .scenarios import BUNDLED, bundled_scenario
from .simulate import Disc, PlannerParams, Scenario


class ConfigError(ValueError):
    """Config parse/validation failure; message carries the field path."""


MODES = ("baseline", "repaired", "both")


@dataclass
class EmitFlags:
    trace_csv: bool = True
    trace_json: bool = True
    svg_frames: bool = False


@dataclass
class RunConfig:
    scenario: Scenario
    mode: str = "repaired"
    base_seed: int = 0
    out_dir: str = "out"
    emit: EmitFlags = field(default_factory=EmitFlags)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(
                "mode: expected one of %s, got %r" % ("/".join(MODES), self.mode))
        if not isinstance(self.base_seed, int) or isinstance(self.base_seed, bool):
            raise ConfigError("seed: expected an integer, got %r" % (self.base_seed,))

    @property
    def modes(self) -> List[str]:
        return ["baseline", "repaired"] if self.mode == "both" else [self.mode]


def _require(mapping: Dict[str, Any], key: str, path: str) -> Any:
    if key not in mapping:
        raise ConfigError("%s: missing required key %r" % (path, key))
    return mapping[key]


def _as_mapping(value: Any, path: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ConfigError("%s: expected a mapping, got %s"
                          % (path, type(value).__name__))
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError("%s: expected a number, got %r" % (path, value))
    return float(value)


def _as_int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError("%s: expected an integer, got %r" % (path, value))
    return value


def _as_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError("%s: expected true/false, got %r" % (path, value))
    return value


def _as_point(value: Any, path: str) -> Vec2:
    if (not isinstance(value, (list, tuple)) or len(value) != 2):
        raise ConfigError("%s: expected [x, y], got %r" % (path, value))
    return Vec2(_as_number(value[0], path + "[0]"),
                _as_number(value[1], path + "[1]"))


def _positive(value: float, path: str) -> float:
    if value <= 0.0:
        raise ConfigError("%s: must be positive, got %r" % (path, value))
    return value


def _parse_curve_part(raw: Any, path: str) -> ReferenceCurve:
    part = _as_mapping(raw, path)
    kind = _require(part, "kind", path)
    known = {"kind", "start", "end", "center", "radius", "start_angle",
             "sweep", "points"}
    for key in part:
        if key not in known:
            raise ConfigError("%s.%s: unknown key" % (path, key))
    if kind == "line":
        return Line(_as_point(_require(part, "start", path), path + ".start"),
                    _as_point(_require(part, "end", path), path + ".end"))
    if kind == "arc":
        radius = _positive(_as_number(_require(part, "radius", path),
                                      path + ".radius"), path + ".radius")
        return Arc(_as_point(_require(part, "center", path), path + ".center"),
                   radius,
                   _as_number(_require(part, "start_angle", path),
                              path + ".start_angle"),
                   _as_number(_require(part, "sweep", path), path + ".sweep"))
    if kind == "spline":
        pts_raw = _require(part, "points", path)
        if not isinstance(pts_raw, list) or len(pts_raw) < 3:
            raise ConfigError("%s.points: expected a list of at least 3 "
                              "waypoints" % path)
        pts = [_as_point(p, "%s.points[%d]" % (path, i))
               for i, p in enumerate(pts_raw)]
        return Spline(pts)
    raise ConfigError("%s.kind: expected line/arc/spline, got %r" % (path, kind))


def _parse_curve(raw: Any, path: str) -> ReferenceCurve:
    if isinstance(raw, dict):
        return _parse_curve_part(raw, path)
    if not isinstance(raw, list) or not raw:
        raise ConfigError("%s: expected a curve part or a non-empty list "
                          "of curve parts" % path)
    parts = [_parse_curve_part(p, "%s[%d]" % (path, i))
             for i, p in enumerate(raw)]
    if len(parts) == 1:
        return parts[0]
    try:
        return CompositeCurve(parts)
    except ValueError as exc:
        raise ConfigError("%s: %s" % (path, exc)) from exc


def _parse_planner(raw: Any, path: str) -> PlannerParams:
    mapping = _as_mapping(raw, path)
    kwargs: Dict[str, Any] = {}
    for key, value in mapping.items():
        if key in ("num_candidates", "horizon_stations", "replan_stride",
                   "max_ticks"):
            kwargs[key] = _as_int(value, "%s.%s" % (path, key))
        elif key == "weights":
            if not isinstance(value, (list, tuple)) or len(value) != 3:
                raise ConfigError("%s.weights: expected [smoothness, "
                                  "centering, bounds]" % path)
            kwargs["weight_smoothness"] = _as_number(value[0],
                                                     path + ".weights[0]")
            kwargs["weight_centering"] = _as_number(value[1],
                                                    path + ".weights[1]")
            kwargs["weight_bounds"] = _as_number(value[2],
                                                 path + ".weights[2]")
        else:
            raise ConfigError("%s.%s: unknown key" % (path, key))
    try:
        return PlannerParams(**kwargs)
    except ValueError as exc:
        raise ConfigError("%s: %s" % (path, exc)) from exc


def _parse_scenario(raw: Any, path: str = "scenario") -> Scenario:
    if isinstance(raw, str):
        if raw not in BUNDLED:
            raise ConfigError("%s: unknown bundled scenario %r (available: %s)"
                              % (path, raw, ", ".join(sorted(BUNDLED))))
        return bundled_scenario(raw)
    mapping = _as_mapping(raw, path)
    known = {"name", "curve", "spacing", "corridor", "inner_widening",
             "obstacle", "clearance", "agent_start", "agent_heading",
             "goal_station", "planner"}
    for key in mapping:
        if key not in known:
            raise ConfigError("%s.%s: unknown key" % (path, key))
    name = mapping.get("name", "custom")
    if not isinstance(name, str) or not name:
        raise ConfigError("%s.name: expected a non-empty string" % path)
    curve = _parse_curve(_require(mapping, "curve", path), path + ".curve")

    kwargs: Dict[str, Any] = {"name": name, "reference": curve}
    if "spacing" in mapping:
        kwargs["spacing"] = _positive(
            _as_number(mapping["spacing"], path + ".spacing"),
            path + ".spacing")
    if "corridor" in mapping:
        corr = mapping["corridor"]
        if not isinstance(corr, (list, tuple)) or len(corr) != 2:
            raise ConfigError("%s.corridor: expected [lower, upper]" % path)
        lo = _as_number(corr[0], path + ".corridor[0]")
        hi = _as_number(corr[1], path + ".corridor[1]")
        if lo > hi:
            raise ConfigError("%s.corridor: lower %r exceeds upper %r"
                              % (path, lo, hi))
        kwargs["corridor_lower"], kwargs["corridor_upper"] = lo, hi
    if "inner_widening" in mapping and mapping["inner_widening"] is not None:
        kwargs["inner_widening"] = _positive(
            _as_number(mapping["inner_widening"], path + ".inner_widening"),
            path + ".inner_widening")
    if "obstacle" in mapping and mapping["obstacle"] is not None:
        obs = _as_mapping(mapping["obstacle"], path + ".obstacle")
        for key in obs:
            if key not in ("center", "radius"):
                raise ConfigError("%s.obstacle.%s: unknown key" % (path, key))
        radius = _positive(
            _as_number(_require(obs, "radius", path + ".obstacle"),
                       path + ".obstacle.radius"),
            path + ".obstacle.radius")
        kwargs["obstacle"] = Disc(
            _as_point(_require(obs, "center", path + ".obstacle"),
                      path + ".obstacle.center"), radius)
    if "clearance" in mapping:
        clearance = _as_number(mapping["clearance"], path + ".clearance")
        if clearance < 0.0:
            raise ConfigError("%s.clearance: must be >= 0, got %r"
                              % (path, clearance))
        kwargs["clearance"] = clearance
    if "agent_start" in mapping:
        kwargs["agent_start"] = _as_point(mapping["agent_start"],
                                          path + ".agent_start")
    if "agent_heading" in mapping:
        kwargs["agent_heading"] = _as_number(mapping["agent_heading"],
                                             path + ".agent_heading")
    if "goal_station" in mapping and mapping["goal_station"] is not None:
        kwargs["goal_station"] = _positive(
            _as_number(mapping["goal_station"], path + ".goal_station"),
            path + ".goal_station")
    if "planner" in mapping:
        kwargs["planner"] = _parse_planner(mapping["planner"], path + ".planner")
    try:
        scenario = Scenario(**kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("%s: %s" % (path, exc)) from exc
    try:
        # sample eagerly so geometry violations surface as config errors
        scenario.polyline()
    except ValueError as exc:
        raise ConfigError("%s: %s" % (path, exc)) from exc
    return scenario


def parse_config(path: str) -> RunConfig:
    """Load and validate a YAML run config from a file path."""
    try:
        with open(path, "r") as handle:
            raw = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError("cannot read config %r: %s" % (path, exc)) from exc
    except yaml.YAMLError as exc:
        raise ConfigError("invalid YAML in %r: %s" % (path, exc)) from exc
    if raw is None:
        raise ConfigError("config %r is empty" % path)
    mapping = _as_mapping(raw, "config")
    return _config_from_mapping(mapping)


def _config_from_mapping(mapping: Dict[str, Any]) -> RunConfig:
    known = {"scenario", "mode", "seed", "out_dir", "emit"}
    for key in mapping:
        if key not in known:
            raise ConfigError("config.%s: unknown key" % key)
    scenario = _parse_scenario(_require(mapping, "scenario", "config"))

    kwargs: Dict[str, Any] = {"scenario": scenario}
    if "mode" in mapping:
        mode = mapping["mode"]
        if mode not in MODES:
            raise ConfigError("mode: expected one of %s, got %r"
                              % ("/".join(MODES), mode))
        kwargs["mode"] = mode
    if "seed" in mapping:
        kwargs["base_seed"] = _as_int(mapping["seed"], "seed")
    if "out_dir" in mapping:
        out_dir = mapping["out_dir"]
        if not isinstance(out_dir, str) or not out_dir:
            raise ConfigError("out_dir: expected a non-empty path string")
        kwargs["out_dir"] = out_dir
    if "emit" in mapping:
        emit_raw = _as_mapping(mapping["emit"], "emit")
        flags = EmitFlags()
        for key, value in emit_raw.items():
            if key not in ("trace_csv", "trace_json", "svg_frames"):
                raise ConfigError("emit.%s: unknown key" % key)
            setattr(flags, key, _as_bool(value, "emit.%s" % key))
        kwargs["emit"] = flags
    return RunConfig(**kwargs)


def load_config(ref: str) -> RunConfig:
    """Resolve a --config argument: a bundled scenario name or a YAML path.

    Bundled names never shadow real files: an existing path wins.
    """
    if not os.path.exists(ref) and ref in BUNDLED:
        return RunConfig(scenario=bundled_scenario(ref))
    return parse_config(ref)


def apply_overrides(config: RunConfig, mode: Optional[str] = None,
                    seed: Optional[int] = None, out_dir: Optional[str] = None,
                    svg: Optional[bool] = None) -> RunConfig:
    """Fold CLI flags over a parsed config (flags win)."""
    if mode is not None:
        if mode not in MODES:
            raise ConfigError("mode: expected one of %s, got %r"
                              % ("/".join(MODES), mode))
        config = replace(config, mode=mode)
    if seed is not None:
        if isinstance(seed, bool) or not isinstance(seed, int):
            raise ConfigError("seed: expected an integer, got %r" % (seed,))
        config = replace(config, base_seed=seed)
    if out_dir is not None:
        config = replace(config, out_dir=out_dir)
    if svg:
        config = replace(config, emit=EmitFlags(
            trace_csv=config.emit.trace_csv,
            trace_json=config.emit.trace_json, svg_frames=True))
    return config
