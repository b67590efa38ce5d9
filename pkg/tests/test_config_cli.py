import csv
import io
import json
import math
import os

import pytest

from frenetplan.cli import main
from frenetplan.config import ConfigError, apply_overrides, load_config, parse_config
from frenetplan.curves import Arc, CompositeCurve
from frenetplan.output import emit_trace, trace_csv_text, trace_json_obj
from frenetplan.simulate import PlanTrace


def write(tmp_path, text, name="config.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


# -- config parsing --------------------------------------------------------

def test_minimal_config_defaults(tmp_path):
    cfg = parse_config(write(tmp_path, "scenario: u_road\n"))
    assert cfg.scenario.name == "u_road"
    assert cfg.mode == "repaired"
    assert cfg.base_seed == 0
    assert cfg.emit.trace_csv and cfg.emit.trace_json
    assert not cfg.emit.svg_frames


def test_inline_scenario(tmp_path):
    text = """
scenario:
  name: bend
  curve:
    - {kind: line, start: [0, 0], end: [20, 0]}
    - {kind: arc, center: [20, 5], radius: 5.0, start_angle: -1.5707963267948966, sweep: 1.5707963267948966}
  spacing: 0.25
  corridor: [-2, 2]
  clearance: 0.25
mode: both
seed: 9
"""
    cfg = parse_config(write(tmp_path, text))
    assert cfg.scenario.name == "bend"
    assert isinstance(cfg.scenario.reference, CompositeCurve)
    assert cfg.scenario.corridor_upper == 2.0
    assert cfg.mode == "both"
    assert cfg.modes == ["baseline", "repaired"]
    assert cfg.base_seed == 9


def test_single_arc_curve(tmp_path):
    text = """
scenario:
  name: loop
  curve: {kind: arc, center: [0, 0], radius: 10.0, start_angle: 0.0, sweep: 3.141592653589793}
  spacing: 0.5
"""
    cfg = parse_config(write(tmp_path, text))
    assert isinstance(cfg.scenario.reference, Arc)


def test_spacing_violation_is_config_error(tmp_path):
    text = """
scenario:
  name: loop
  curve: {kind: arc, center: [0, 0], radius: 10.0, start_angle: 0.0, sweep: 3.141592653589793}
  spacing: 2.0
"""
    with pytest.raises(ConfigError, match="spacing"):
        parse_config(write(tmp_path, text))


def test_negative_radius_names_field(tmp_path):
    text = """
scenario:
  name: loop
  curve: {kind: arc, center: [0, 0], radius: -3.0, start_angle: 0.0, sweep: 1.0}
"""
    with pytest.raises(ConfigError, match=r"curve\.radius"):
        parse_config(write(tmp_path, text))


def test_unknown_keys_rejected(tmp_path):
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(write(tmp_path, "scenario: u_road\nbogus: 1\n"))
    with pytest.raises(ConfigError, match="unknown key"):
        parse_config(write(
            tmp_path, "scenario:\n  name: x\n  curve: {kind: line, "
            "start: [0, 0], end: [1, 0]}\n  wheels: 4\n"))


def test_invalid_mode_rejected(tmp_path):
    with pytest.raises(ConfigError, match="mode"):
        parse_config(write(tmp_path, "scenario: u_road\nmode: turbo\n"))


def test_unknown_bundled_name(tmp_path):
    with pytest.raises(ConfigError, match="unknown bundled"):
        parse_config(write(tmp_path, "scenario: no_such_road\n"))


def test_empty_file_rejected(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(write(tmp_path, ""))


def test_load_config_accepts_bundled_name():
    cfg = load_config("straight")
    assert cfg.scenario.name == "straight"


def test_overrides():
    cfg = load_config("straight")
    out = apply_overrides(cfg, mode="both", seed=5, out_dir="elsewhere",
                          svg=True)
    assert out.mode == "both"
    assert out.base_seed == 5
    assert out.out_dir == "elsewhere"
    assert out.emit.svg_frames
    # the original is untouched
    assert cfg.mode != "both" or cfg is not out


# -- trace serialization ---------------------------------------------------

def test_empty_trace_serialization(tmp_path):
    trace = PlanTrace("straight", "baseline", 0, 98.0, False, 0.0, [])
    text = trace_csv_text([trace])
    lines = text.strip().split("\n")
    assert len(lines) == 1 and lines[0].startswith("mode,row,tick")
    assert trace_json_obj([trace]) == []
    emit_trace(trace, str(tmp_path))
    assert (tmp_path / "trace.csv").exists()
    assert json.loads((tmp_path / "trace.json").read_text()) == []


# -- CLI end to end --------------------------------------------------------

def test_cli_run_straight(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["run", "--config", "straight", "--out", str(out)])
    assert code == 0
    assert (out / "trace.csv").exists()
    assert (out / "trace.json").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["scenario"] == "straight"
    assert summary["runs"]["repaired"]["goal_reached"] is True
    assert summary["runs"]["repaired"]["runtime_seconds"] > 0.0
    printed = capsys.readouterr().out
    assert "goal" in printed


def test_cli_csv_json_agree(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--config", "straight", "--out", str(out)]) == 0
    rows = list(csv.DictReader(io.StringIO((out / "trace.csv").read_text())))
    ticks = json.loads((out / "trace.json").read_text())
    point_rows = [r for r in rows if r["row"] == "point"]
    json_points = [(t["tick"], p) for t in ticks
                   for p in t["selected"]["points"]]
    assert len(point_rows) == len(json_points)
    for row, (tick, point) in zip(point_rows, json_points):
        assert int(row["tick"]) == tick
        assert float(row["station"]) == point["station"]
        assert float(row["offset"]) == point["offset"]
        assert float(row["x"]) == point["x"]
        assert float(row["y"]) == point["y"]


def test_cli_missing_config(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.yaml")]) == 1


def test_cli_bad_config_exits_one(tmp_path):
    path = write(tmp_path, "scenario: u_road\nmode: alien\n")
    assert main(["run", "--config", path]) == 1


def test_cli_unwritable_out_dir(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x")
    out = blocker / "out"  # path component under a regular file
    assert main(["run", "--config", "straight", "--out", str(out)]) == 1


def test_cli_tick_limit_exits_three(tmp_path):
    text = """
scenario:
  name: short
  curve: {kind: line, start: [0, 0], end: [100, 0]}
  planner: {max_ticks: 3}
"""
    path = write(tmp_path, text)
    code = main(["run", "--config", path, "--out", str(tmp_path / "out")])
    assert code == 3


def test_cli_infeasible_corridor_exits_two(tmp_path):
    text = """
scenario:
  name: blocked
  curve: {kind: line, start: [0, 0], end: [100, 0]}
  corridor: [-1, 1]
  obstacle: {center: [50, 0], radius: 2.0}
  clearance: 0.5
"""
    path = write(tmp_path, text)
    code = main(["run", "--config", path, "--out", str(tmp_path / "out")])
    assert code == 2


def test_cli_svg_frames(tmp_path):
    out = tmp_path / "out"
    code = main(["run", "--config", "straight", "--out", str(out), "--svg"])
    assert code == 0
    frames = sorted(os.listdir(out / "frames"))
    assert len(frames) == 40
    assert frames[0] == "tick_0000.svg"
    body = (out / "frames" / frames[0]).read_text()
    assert body.startswith("<svg") and body.rstrip().endswith("</svg>")


def test_cli_both_mode_subdirs(tmp_path):
    out = tmp_path / "out"
    code = main(["run", "--config", "straight", "--mode", "both",
                 "--out", str(out), "--svg"])
    assert code == 0
    assert (out / "frames" / "baseline").is_dir()
    assert (out / "frames" / "repaired").is_dir()
    summary = json.loads((out / "summary.json").read_text())
    assert set(summary["runs"]) == {"baseline", "repaired"}
