"""Triangle mesh smoothing as a finite game between elements.

Each element chooses a power of a regularizing transformation; vertices
move to the mean of their elements' proposals; an element's payoff is its
own resulting quality. The package finds pure Nash equilibria of that game
(exhaustively or by best-response dynamics), compares them against the
globally best and the uniform profile, and iterates the game as a
smoothing procedure, globally or around the worst element.
"""
from .fileio import MeshParseError, read_mesh, read_obj, read_off, write_off
from .game import (
    DEFAULT_ENUMERATION_BUDGET,
    Deviation,
    EnumerationBudgetError,
    GameConfig,
    IMPROVEMENT_TOL,
    NashResult,
    ProfileOutcome,
    VerifyResult,
    best_profile,
    best_response_nash,
    evaluate_profile,
    exhaustive_nash,
    uniform_profile_outcome,
    verify_nash,
)
from .mesh import (
    Mesh,
    MeshBuildError,
    build_mesh,
    element_qualities,
    element_quality,
    mean_ratio_quality,
    mesh_quality,
)
from .report import ComparisonRecord, RunSpec, run_compare
from .scenarios import SCENARIO_NAMES, generate_scenario
from .smoothing import (
    IterationRecord,
    SmoothingConfig,
    SmoothingError,
    SmoothingReport,
    smooth,
    smooth_global,
    smooth_local_worst,
)
from .svg import emit_svg, render_svg
from .transform import (
    EQUILATERAL_THETA,
    TransformParams,
    transform_element,
    transform_power,
)

__version__ = "0.1.0"

__all__ = [
    "Mesh",
    "MeshBuildError",
    "MeshParseError",
    "build_mesh",
    "element_quality",
    "element_qualities",
    "mean_ratio_quality",
    "mesh_quality",
    "read_mesh",
    "read_off",
    "read_obj",
    "write_off",
    "TransformParams",
    "EQUILATERAL_THETA",
    "transform_element",
    "transform_power",
    "GameConfig",
    "ProfileOutcome",
    "NashResult",
    "Deviation",
    "VerifyResult",
    "EnumerationBudgetError",
    "IMPROVEMENT_TOL",
    "DEFAULT_ENUMERATION_BUDGET",
    "evaluate_profile",
    "verify_nash",
    "exhaustive_nash",
    "best_profile",
    "best_response_nash",
    "uniform_profile_outcome",
    "SmoothingConfig",
    "SmoothingReport",
    "SmoothingError",
    "IterationRecord",
    "smooth",
    "smooth_global",
    "smooth_local_worst",
    "generate_scenario",
    "SCENARIO_NAMES",
    "RunSpec",
    "ComparisonRecord",
    "run_compare",
    "emit_svg",
    "render_svg",
    "__version__",
]
