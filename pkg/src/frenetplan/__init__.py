"""Frenet-frame trajectory planning on sampled reference polylines."""

from ._kernels import backend_name as kernel_backend
from .curves import (
    Arc,
    CompositeCurve,
    FrenetCoord,
    Line,
    RefPolyline,
    ReferenceCurve,
    SamplingError,
    Spline,
    frenet_to_cartesian,
    sample_polyline,
)
from .geometry import (
    ParallelError,
    Segment,
    Vec2,
    dot,
    line_intersection,
    point_line_distance,
    point_segment_distance,
    segments_intersect,
)
from .projection import (
    DegenerateFanError,
    FollowingReport,
    NearestSet,
    cartesian_to_frenet,
    check_following,
    fan_project,
    nearest_vertices,
    project_path,
    ray_project,
    scan_project,
)
from .generation import (
    CandidateTrajectory,
    CandidateValidation,
    CorridorBounds,
    generate_baseline,
    repair_trajectory,
    validate_candidate,
)
from .simulate import (
    AgentState,
    Disc,
    InfeasibleCorridorError,
    NoFeasibleCandidate,
    PlanTrace,
    PlannerParams,
    Scenario,
    build_corridor,
    plan_step,
    run_simulation,
    score_candidate,
)
from .scenarios import bundled_scenario
from .config import ConfigError, RunConfig, load_config, parse_config
from .output import emit_trace, write_svg_frames, write_trace_csv, \
    write_trace_json

__version__ = "0.1.0"
