"""Trace serialization: CSV, JSON, run summary, and per-tick SVG frames.

All numbers are written with Python's shortest round-trip float repr
(17 significant digits when needed) so repeated runs of the same config
produce byte-identical trace files.  Wall-clock runtime goes only into
summary.json, never into the trace files.
"""

from __future__ import annotations

import json
import math
import os
from typing import Dict, List, Optional, Sequence

import numpy as np

from .curves import RefPolyline
from .simulate import PlanTrace, Scenario, TickRecord, build_corridor

CSV_HEADER = ("mode,row,tick,seed,cost,monotone,self_intersecting,reversal,"
              "discontinuity,collision,max_kappa_d,n_points,point_index,"
              "station,offset,x,y,heading")


def _fmt(value: float) -> str:
    return repr(float(value))


def _flag(value: bool) -> str:
    return "1" if value else "0"


def _tick_rows(trace: PlanTrace, record: TickRecord) -> List[str]:
    mode = trace.mode
    rows = [",".join([
        mode, "tick", str(record.tick), str(record.selected_summary.seed),
        _fmt(record.selected_summary.cost), "", "", "", "", "", "", "", "",
        _fmt(record.agent_station), "", _fmt(record.agent_x),
        _fmt(record.agent_y), _fmt(record.agent_heading)])]
    for cand in record.candidates:
        rows.append(",".join([
            mode, "candidate", str(record.tick), str(cand.seed),
            _fmt(cand.cost), _flag(cand.monotone),
            _flag(cand.self_intersecting), _flag(cand.reversal),
            _flag(cand.discontinuity), _flag(cand.collision),
            _fmt(cand.max_kappa_d), str(cand.n_points), "", "", "", "", "",
            ""]))
    sel = record.selected
    for i in range(len(sel)):
        rows.append(",".join([
            mode, "point", str(record.tick),
            str(record.selected_summary.seed), "", "", "", "", "", "", "", "",
            str(i), _fmt(sel.stations[i]), _fmt(sel.offsets[i]),
            _fmt(record.selected_xs[i]), _fmt(record.selected_ys[i]), ""]))
    return rows


def trace_csv_text(traces: Sequence[PlanTrace]) -> str:
    """Render one or more traces as a single CSV document."""
    lines = [CSV_HEADER]
    for trace in traces:
        for record in trace.records:
            lines.extend(_tick_rows(trace, record))
    return "\n".join(lines) + "\n"


def _tick_obj(trace: PlanTrace, record: TickRecord) -> Dict:
    sel = record.selected
    return {
        "mode": trace.mode,
        "tick": record.tick,
        "agent": {
            "x": record.agent_x, "y": record.agent_y,
            "heading": record.agent_heading,
            "station": record.agent_station,
        },
        "candidates": [
            {
                "seed": cand.seed, "cost": cand.cost,
                "monotone": cand.monotone,
                "self_intersecting": cand.self_intersecting,
                "reversal": cand.reversal,
                "discontinuity": cand.discontinuity,
                "collision": cand.collision,
                "max_kappa_d": cand.max_kappa_d,
                "n_points": cand.n_points,
            }
            for cand in record.candidates
        ],
        "selected": {
            "seed": record.selected_summary.seed,
            "cost": record.selected_summary.cost,
            "points": [
                {
                    "index": i,
                    "station": float(sel.stations[i]),
                    "offset": float(sel.offsets[i]),
                    "x": float(record.selected_xs[i]),
                    "y": float(record.selected_ys[i]),
                }
                for i in range(len(sel))
            ],
        },
    }


def trace_json_obj(traces: Sequence[PlanTrace]) -> List[Dict]:
    """Flat array of tick objects (mode-tagged), mirroring the CSV rows."""
    return [_tick_obj(trace, record)
            for trace in traces for record in trace.records]


def write_trace_csv(path: str, traces: Sequence[PlanTrace]) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(trace_csv_text(traces))


def write_trace_json(path: str, traces: Sequence[PlanTrace]) -> None:
    with open(path, "w") as handle:
        json.dump(trace_json_obj(traces), handle, indent=2)
        handle.write("\n")


def emit_trace(trace: PlanTrace, out_dir: str, trace_csv: bool = True,
               trace_json: bool = True) -> None:
    """Write trace.csv / trace.json for a single run."""
    os.makedirs(out_dir, exist_ok=True)
    if trace_csv:
        write_trace_csv(os.path.join(out_dir, "trace.csv"), [trace])
    if trace_json:
        write_trace_json(os.path.join(out_dir, "trace.json"), [trace])


def summary_obj(traces: Sequence[PlanTrace],
                runtimes: Optional[Dict[str, float]] = None) -> Dict:
    runs = {}
    for trace in traces:
        entry = {
            "goal_reached": trace.goal_reached,
            "ticks": trace.n_ticks,
            "final_station": trace.final_station,
            "anomalous_selected_ticks": trace.anomalous_selected_count,
            "candidate_totals": {
                key: trace.diagnostics_total(key)
                for key in ("candidates", "reversal", "self_intersection",
                            "non_monotone", "discontinuity", "collision")
            },
        }
        if runtimes and trace.mode in runtimes:
            entry["runtime_seconds"] = runtimes[trace.mode]
        runs[trace.mode] = entry
    first = traces[0]
    return {
        "scenario": first.scenario_name,
        "base_seed": first.base_seed,
        "goal_station": first.goal_station,
        "runs": runs,
    }


def write_summary(path: str, traces: Sequence[PlanTrace],
                  runtimes: Optional[Dict[str, float]] = None) -> None:
    with open(path, "w") as handle:
        json.dump(summary_obj(traces, runtimes), handle, indent=2)
        handle.write("\n")


# --- SVG frames -----------------------------------------------------------

_SVG_PAD = 3.0


def _polyline_svg(xs, ys, to_svg, color: str, width: float,
                  dashed: bool = False) -> str:
    pts = " ".join("%.3f,%.3f" % to_svg(x, y) for x, y in zip(xs, ys))
    dash = ' stroke-dasharray="1.5,1.5"' if dashed else ""
    return ('<polyline points="%s" fill="none" stroke="%s" '
            'stroke-width="%.3f"%s/>' % (pts, color, width, dash))


def render_frame_svg(scenario: Scenario, polyline: RefPolyline,
                     record: TickRecord,
                     corridor_edges=None) -> str:
    """One planning frame: reference (blue), corridor (gray), selected
    trajectory (red), obstacle (black), agent (triangle)."""
    xs_ref, ys_ref = polyline.xs, polyline.ys
    all_x = [xs_ref, record.selected_xs, np.array([record.agent_x])]
    all_y = [ys_ref, record.selected_ys, np.array([record.agent_y])]
    if corridor_edges is not None:
        for exs, eys in corridor_edges:
            all_x.append(exs)
            all_y.append(eys)
    if scenario.obstacle is not None:
        obs = scenario.obstacle
        r = obs.radius + scenario.clearance
        all_x.append(np.array([obs.center.x - r, obs.center.x + r]))
        all_y.append(np.array([obs.center.y - r, obs.center.y + r]))
    xmin = min(float(np.min(a)) for a in all_x) - _SVG_PAD
    xmax = max(float(np.max(a)) for a in all_x) + _SVG_PAD
    ymin = min(float(np.min(a)) for a in all_y) - _SVG_PAD
    ymax = max(float(np.max(a)) for a in all_y) + _SVG_PAD
    width, height = xmax - xmin, ymax - ymin
    scale = 12.0  # px per meter

    def to_svg(x, y):
        return ((x - xmin) * scale, (ymax - y) * scale)

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%.0f" height="%.0f" '
        'viewBox="0 0 %.3f %.3f">' % (width * scale, height * scale,
                                      width * scale, height * scale),
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if corridor_edges is not None:
        for exs, eys in corridor_edges:
            parts.append(_polyline_svg(exs, eys, to_svg, "#bbbbbb", 0.8,
                                       dashed=True))
    parts.append(_polyline_svg(xs_ref, ys_ref, to_svg, "blue", 1.6))
    if scenario.obstacle is not None:
        obs = scenario.obstacle
        cx, cy = to_svg(obs.center.x, obs.center.y)
        parts.append('<circle cx="%.3f" cy="%.3f" r="%.3f" fill="black"/>'
                     % (cx, cy, obs.radius * scale))
        parts.append('<circle cx="%.3f" cy="%.3f" r="%.3f" fill="none" '
                     'stroke="black" stroke-width="0.8" '
                     'stroke-dasharray="2,2"/>'
                     % (cx, cy, (obs.radius + scenario.clearance) * scale))
    parts.append(_polyline_svg(record.selected_xs, record.selected_ys,
                               to_svg, "red", 1.6))
    # agent: isoceles triangle pointing along the heading
    h = record.agent_heading
    nose = 0.9
    tail = 0.55
    pts = []
    for ang, rad in ((0.0, nose), (2.5, tail), (-2.5, tail)):
        px = record.agent_x + rad * math.cos(h + ang)
        py = record.agent_y + rad * math.sin(h + ang)
        pts.append("%.3f,%.3f" % to_svg(px, py))
    parts.append('<polygon points="%s" fill="#207020" stroke="black" '
                 'stroke-width="0.6"/>' % " ".join(pts))
    parts.append('<text x="4" y="14" font-family="monospace" font-size="12">'
                 'tick %d</text>' % record.tick)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def corridor_edges_cartesian(scenario: Scenario, polyline: RefPolyline):
    """Cartesian polylines of the lateral corridor bounds, for plotting."""
    corridor = build_corridor(scenario, polyline)
    cum = polyline.cumulative_s
    lower = polyline.to_cartesian_batch(cum, corridor.lower)
    upper = polyline.to_cartesian_batch(cum, corridor.upper)
    return [lower, upper]


def write_svg_frames(out_dir: str, scenario: Scenario,
                     polyline: RefPolyline, trace: PlanTrace,
                     subdir: Optional[str] = None) -> str:
    """Write frames/tick_%04d.svg (frames/<subdir>/ when given)."""
    frames_dir = os.path.join(out_dir, "frames")
    if subdir:
        frames_dir = os.path.join(frames_dir, subdir)
    os.makedirs(frames_dir, exist_ok=True)
    edges = corridor_edges_cartesian(scenario, polyline)
    for record in trace.records:
        svg = render_frame_svg(scenario, polyline, record,
                               corridor_edges=edges)
        path = os.path.join(frames_dir, "tick_%04d.svg" % record.tick)
        with open(path, "w") as handle:
            handle.write(svg)
    return frames_dir
