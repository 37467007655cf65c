"""Iterated smoothing driven by repeated play of the element game.

Two modes share a report format. Global iteration solves the game on the
whole mesh and applies the resulting coordinates, then plays again on the
new geometry until the worst element reaches the target quality, progress
stalls, or the iteration budget runs out. Local iteration instead finds the
single worst element below target, carves out its one-level neighborhood,
and solves the game on that submesh only, holding the rim fixed so the rest
of the mesh is untouched.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .game import (
    GameConfig,
    NashResult,
    best_response_nash,
    exhaustive_nash,
    IMPROVEMENT_TOL,
)
from .mesh import Mesh, build_mesh, element_qualities

SMOOTHING_MODES = ("global_iterated", "local_worst_element")
SOLVERS = ("exhaustive", "best_response")

#: Mean coordinate movement below this counts as no progress.
STALL_TOL = 1e-9


class SmoothingError(RuntimeError):
    """Smoothing cannot continue (e.g. a subgame has no pure equilibrium)."""


@dataclass(frozen=True)
class SmoothingConfig:
    """One smoothing run.

    game: the per-iteration game rules.
    mode: 'global_iterated' plays on the whole mesh each iteration;
        'local_worst_element' plays on the worst element's neighborhood.
    target_quality: stop once every element is at or above this quality.
    max_iterations: iteration budget.
    solver: 'exhaustive' enumerates (and needs a tractable profile space);
        'best_response' iterates unilateral improvements.
    """

    game: GameConfig
    mode: str = "global_iterated"
    target_quality: float = 0.95
    max_iterations: int = 50
    solver: str = "exhaustive"

    def __post_init__(self):
        if self.mode not in SMOOTHING_MODES:
            raise ValueError(f"unknown mode {self.mode!r} (known: {SMOOTHING_MODES})")
        if self.solver not in SOLVERS:
            raise ValueError(f"unknown solver {self.solver!r} (known: {SOLVERS})")
        if not 0.0 < self.target_quality <= 1.0:
            raise ValueError(
                f"target_quality must lie in (0, 1], got {self.target_quality}"
            )
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")


@dataclass(frozen=True)
class IterationRecord:
    """State after one smoothing iteration.

    profile is the strategy profile applied this iteration, or None when the
    iteration made no move (a skipped local element). Qualities describe the
    whole mesh after the move.
    """

    index: int
    profile: tuple[int, ...] | None
    mean_quality: float
    min_quality: float
    coords: np.ndarray
    diagnostics: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class SmoothingReport:
    """iterations may be empty when the input already meets the target."""

    iterations: tuple[IterationRecord, ...]
    final_coords: np.ndarray
    final_mean_quality: float
    final_min_quality: float
    terminated_by: str


def _mesh_state(mesh: Mesh, coords: np.ndarray, metric: str) -> tuple[float, float]:
    q = element_qualities(mesh, coords=coords, metric=metric)
    return float(q.mean()), float(q.min())


def _solve(mesh: Mesh, config: SmoothingConfig, coords: np.ndarray) -> NashResult:
    if config.solver == "exhaustive":
        equilibria = exhaustive_nash(mesh, config.game, coords=coords)
        if not equilibria:
            raise SmoothingError("game has no pure equilibrium")
        return equilibria[0]
    return best_response_nash(mesh, config.game, coords=coords)


def smooth_global(mesh: Mesh, config: SmoothingConfig) -> SmoothingReport:
    """Repeatedly solve the whole-mesh game and adopt the equilibrium.

    Terminates with 'target_reached' once the minimum element quality is at
    or above target_quality, 'stalled' when an iteration moves vertices by
    less than STALL_TOL on average, and 'max_iterations' otherwise. With the
    exhaustive solver the lexicographically smallest equilibrium is adopted;
    a game without a pure equilibrium raises SmoothingError.
    """
    if config.mode != "global_iterated":
        raise ValueError(f"smooth_global requires mode 'global_iterated', got {config.mode!r}")
    coords = mesh.coords.copy()
    records: list[IterationRecord] = []
    terminated_by = "max_iterations"
    for index in range(config.max_iterations):
        _, current_min = _mesh_state(mesh, coords, config.game.metric)
        if current_min >= config.target_quality:
            terminated_by = "target_reached"
            break
        try:
            result = _solve(mesh, config, coords)
        except SmoothingError as err:
            raise SmoothingError(f"iteration {index}: {err}") from err
        moved = float(np.abs(result.outcome.coords - coords).mean())
        coords = result.outcome.coords.copy()
        mean_q, min_q = _mesh_state(mesh, coords, config.game.metric)
        records.append(
            IterationRecord(
                index=index,
                profile=result.profile,
                mean_quality=mean_q,
                min_quality=min_q,
                coords=coords.copy(),
                diagnostics={
                    "method": result.method,
                    "is_equilibrium": result.is_equilibrium,
                    "mean_move": moved,
                },
            )
        )
        if moved < STALL_TOL:
            terminated_by = "stalled"
            break
    else:
        # Loop exhausted the budget; if the last move already reached the
        # target, report that instead.
        _, current_min = _mesh_state(mesh, coords, config.game.metric)
        if current_min >= config.target_quality:
            terminated_by = "target_reached"
    final_mean, final_min = _mesh_state(mesh, coords, config.game.metric)
    return SmoothingReport(
        iterations=tuple(records),
        final_coords=coords,
        final_mean_quality=final_mean,
        final_min_quality=final_min,
        terminated_by=terminated_by,
    )


def _neighborhood(mesh: Mesh, element: int) -> np.ndarray:
    """Indices of all elements sharing a vertex with the given element."""
    members = set()
    for v in mesh.elements[element]:
        members.update(mesh.vertex_to_elements[int(v)])
    return np.array(sorted(members), dtype=np.int64)


def _submesh(
    mesh: Mesh, members: np.ndarray, coords: np.ndarray, fix_boundary: bool
) -> tuple[Mesh, np.ndarray]:
    """Build the neighborhood submesh with its rim held fixed.

    Rim vertices are those also used by elements outside the neighborhood;
    fixing them guarantees the rest of the mesh is unaffected by the local
    game. Vertices on the original mesh boundary stay fixed as well when the
    game says so.
    """
    member_set = set(int(e) for e in members)
    vertex_ids = np.unique(mesh.elements[members])
    local = {int(v): i for i, v in enumerate(vertex_ids)}
    sub_elements = np.array(
        [[local[int(v)] for v in mesh.elements[e]] for e in members], dtype=np.int64
    )
    fixed = np.zeros(len(vertex_ids), dtype=bool)
    for i, v in enumerate(vertex_ids):
        incident = mesh.vertex_to_elements[int(v)]
        if any(int(e) not in member_set for e in incident):
            fixed[i] = True
        elif fix_boundary and mesh.boundary[int(v)]:
            fixed[i] = True
    sub = build_mesh(coords[vertex_ids], sub_elements, boundary=fixed)
    return sub, vertex_ids


def smooth_local_worst(mesh: Mesh, config: SmoothingConfig) -> SmoothingReport:
    """Repair the mesh one worst element at a time.

    Each iteration picks the lowest-quality element below target_quality
    (skipping elements that previously failed to improve), solves the game
    restricted to that element's one-level neighborhood with the rim fixed,
    and writes back only interior vertices. An element whose own quality
    fails to improve by more than IMPROVEMENT_TOL while still below target
    is put aside; it is reconsidered once a later iteration moves vertices
    near it. Terminates with 'target_reached' when no element is below
    target, 'stalled' when all below-target elements are set aside, and
    'max_iterations' otherwise.
    """
    if config.mode != "local_worst_element":
        raise ValueError(
            f"smooth_local_worst requires mode 'local_worst_element', got {config.mode!r}"
        )
    coords = mesh.coords.copy()
    metric = config.game.metric
    skipped: set[int] = set()
    records: list[IterationRecord] = []
    terminated_by = "max_iterations"

    for index in range(config.max_iterations):
        qualities = element_qualities(mesh, coords=coords, metric=metric)
        below = np.nonzero(qualities < config.target_quality)[0]
        if below.size == 0:
            terminated_by = "target_reached"
            break
        active = [int(e) for e in below if int(e) not in skipped]
        if not active:
            terminated_by = "stalled"
            break
        worst = min(active, key=lambda e: (qualities[e], e))

        members = _neighborhood(mesh, worst)
        sub, vertex_ids = _submesh(mesh, members, coords, config.game.fix_boundary)
        sub_game = dataclasses.replace(config.game, fix_boundary=True)
        sub_config = dataclasses.replace(config, game=sub_game)
        try:
            result = _solve(sub, sub_config, sub.coords)
        except SmoothingError as err:
            raise SmoothingError(f"iteration {index}, element {worst}: {err}") from err

        local_worst = int(np.nonzero(members == worst)[0][0])
        old_q = float(qualities[worst])
        new_q = float(result.outcome.utilities[local_worst])
        improved = new_q - old_q > IMPROVEMENT_TOL

        diagnostics = {
            "element": worst,
            "neighborhood": tuple(int(e) for e in members),
            "method": result.method,
            "quality_before": old_q,
            "quality_after": new_q,
        }
        if improved:
            movable = ~sub.boundary
            coords[vertex_ids[movable]] = result.outcome.coords[movable]
            # Geometry changed near these elements, so give any of them that
            # were set aside another chance.
            skipped.difference_update(int(e) for e in members)
            profile: tuple[int, ...] | None = result.profile
        else:
            skipped.add(worst)
            profile = None
            diagnostics["skipped"] = True

        mean_q, min_q = _mesh_state(mesh, coords, metric)
        records.append(
            IterationRecord(
                index=index,
                profile=profile,
                mean_quality=mean_q,
                min_quality=min_q,
                coords=coords.copy(),
                diagnostics=diagnostics,
            )
        )
    else:
        qualities = element_qualities(mesh, coords=coords, metric=metric)
        if float(qualities.min()) >= config.target_quality:
            terminated_by = "target_reached"

    final_mean, final_min = _mesh_state(mesh, coords, metric)
    return SmoothingReport(
        iterations=tuple(records),
        final_coords=coords,
        final_mean_quality=final_mean,
        final_min_quality=final_min,
        terminated_by=terminated_by,
    )


def smooth(mesh: Mesh, config: SmoothingConfig) -> SmoothingReport:
    """Dispatch on config.mode."""
    if config.mode == "global_iterated":
        return smooth_global(mesh, config)
    return smooth_local_worst(mesh, config)
