"""Comparison runs: equilibrium vs globally best vs uniform smoothing.

run_compare sweeps k over a scenario (or a mesh file), solves each game
exhaustively, and writes a self-contained report directory:

  report.json      full record (schema in the README)
  sweep.csv        one row per (k, strategy family)
  compare_k{K}.svg wireframe overlay: initial black, equilibrium blue,
                   best red
  meshes/*.off     initial and per-family smoothed coordinates
  quality_vs_k.png, quality_vs_iterations.png

Every quality in the JSON can be recomputed from the emitted OFF files and
the stored profiles; ks whose profile space exceeds the enumeration budget
appear as explicit skip entries instead of results.
"""
from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .figures import plot_quality_vs_iterations, plot_quality_vs_k
from .game import (
    DEFAULT_ENUMERATION_BUDGET,
    EnumerationBudgetError,
    GameConfig,
    ProfileOutcome,
    best_profile,
    exhaustive_nash,
    uniform_profile_outcome,
)
from .fileio import read_mesh, write_off
from .mesh import Mesh, mesh_quality
from .scenarios import generate_scenario
from .smoothing import SmoothingConfig, SmoothingError, smooth_global
from .svg import BEST_COLOR, INITIAL_COLOR, NASH_COLOR, emit_svg
from .transform import TransformParams


@dataclass(frozen=True)
class RunSpec:
    """Inputs of one comparison run.

    Exactly one of scenario/mesh_path selects the input mesh. ks is the
    sweep of maximum powers; target_quality and max_iterations drive the
    iterated-smoothing trajectories included in the report.
    """

    out_dir: Path
    scenario: str | None = None
    mesh_path: str | None = None
    seed: int = 0
    ks: tuple[int, ...] = (1, 2, 3, 4)
    metric: str = "min_max_edge"
    fix_boundary: bool = False
    transform: TransformParams = field(default_factory=TransformParams)
    target_quality: float = 0.95
    max_iterations: int = 8
    budget: int = DEFAULT_ENUMERATION_BUDGET

    def __post_init__(self):
        if (self.scenario is None) == (self.mesh_path is None):
            raise ValueError("provide exactly one of scenario or mesh_path")
        if not self.ks:
            raise ValueError("ks must be non-empty")
        if any(k < 1 for k in self.ks):
            raise ValueError(f"every k must be >= 1, got {self.ks}")
        if not 0.0 < self.target_quality <= 1.0:
            raise ValueError(f"target_quality must lie in (0, 1], got {self.target_quality}")

    @property
    def label(self) -> str:
        return self.scenario if self.scenario else Path(self.mesh_path).stem


@dataclass(frozen=True)
class FamilyResult:
    """One strategy family's outcome at a fixed k."""

    profile: tuple[int, ...]
    mean_quality: float
    min_quality: float
    mesh_file: str

    def to_dict(self) -> dict:
        return {
            "profile": list(self.profile),
            "mean_quality": self.mean_quality,
            "min_quality": self.min_quality,
            "mesh_file": self.mesh_file,
        }


@dataclass(frozen=True)
class KComparison:
    k: int
    nash: FamilyResult | None = None
    best: FamilyResult | None = None
    uniform: FamilyResult | None = None
    equilibrium_count: int = 0
    skipped: str | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out: dict = {"k": self.k}
        if self.skipped is not None:
            out["skipped"] = self.skipped
            return out
        out["equilibrium_count"] = self.equilibrium_count
        for name, fam in (("nash", self.nash), ("best", self.best), ("uniform", self.uniform)):
            out[name] = fam.to_dict() if fam is not None else None
        out["timings"] = self.timings
        return out


@dataclass(frozen=True)
class ComparisonRecord:
    spec: RunSpec
    initial_mean: float
    initial_min: float
    results: tuple[KComparison, ...]
    trajectories: dict[int, list[float]]

    def to_dict(self) -> dict:
        return {
            "scenario": self.spec.scenario,
            "mesh_path": self.spec.mesh_path,
            "seed": self.spec.seed,
            "config": {
                "metric": self.spec.metric,
                "fix_boundary": self.spec.fix_boundary,
                "theta": self.spec.transform.theta,
                "preserve_area": self.spec.transform.preserve_area,
                "target_quality": self.spec.target_quality,
                "max_iterations": self.spec.max_iterations,
            },
            "ks": list(self.spec.ks),
            "initial": {
                "mean_quality": self.initial_mean,
                "min_quality": self.initial_min,
                "mesh_file": "meshes/initial.off",
            },
            "results": [r.to_dict() for r in self.results],
            "trajectories": {str(k): v for k, v in self.trajectories.items()},
        }


def _load_input(spec: RunSpec) -> Mesh:
    if spec.scenario is not None:
        return generate_scenario(spec.scenario, seed=spec.seed)
    return read_mesh(spec.mesh_path)


def _family(
    mesh_dir: Path, name: str, k: int, profile, outcome: ProfileOutcome, mesh: Mesh
) -> FamilyResult:
    rel = f"meshes/k{k}_{name}.off"
    write_off(mesh_dir / f"k{k}_{name}.off", mesh, coords=outcome.coords)
    return FamilyResult(
        profile=tuple(int(p) for p in profile),
        mean_quality=outcome.mean_quality,
        min_quality=outcome.min_quality,
        mesh_file=rel,
    )


def _compare_one_k(mesh: Mesh, spec: RunSpec, k: int, mesh_dir: Path) -> KComparison:
    config = GameConfig(
        k=k,
        transform=spec.transform,
        metric=spec.metric,
        fix_boundary=spec.fix_boundary,
    )
    timings: dict[str, float] = {}
    try:
        t0 = time.perf_counter()
        equilibria = exhaustive_nash(mesh, config, budget=spec.budget)
        timings["nash_s"] = time.perf_counter() - t0
        t0 = time.perf_counter()
        best_prof, best_out = best_profile(mesh, config, budget=spec.budget)
        timings["best_s"] = time.perf_counter() - t0
    except EnumerationBudgetError as err:
        return KComparison(k=k, skipped=str(err))
    t0 = time.perf_counter()
    uniform_out = uniform_profile_outcome(mesh, config)
    timings["uniform_s"] = time.perf_counter() - t0

    nash = None
    if equilibria:
        first = equilibria[0]
        nash = _family(mesh_dir, "nash", k, first.profile, first.outcome, mesh)
    best = _family(mesh_dir, "best", k, best_prof, best_out, mesh)
    uniform = _family(mesh_dir, "uniform", k, (k,) * mesh.n_elements, uniform_out, mesh)
    return KComparison(
        k=k,
        nash=nash,
        best=best,
        uniform=uniform,
        equilibrium_count=len(equilibria),
        timings=timings,
    )


def _trajectory(mesh: Mesh, spec: RunSpec, k: int, initial_mean: float) -> list[float]:
    config = SmoothingConfig(
        game=GameConfig(
            k=k,
            transform=spec.transform,
            metric=spec.metric,
            fix_boundary=spec.fix_boundary,
        ),
        mode="global_iterated",
        target_quality=spec.target_quality,
        max_iterations=spec.max_iterations,
        solver="exhaustive",
    )
    values = [initial_mean]
    try:
        result = smooth_global(mesh, config)
    except (SmoothingError, EnumerationBudgetError):
        return values
    values.extend(
        rec.mean_quality for rec in result.iterations if rec.profile is not None
    )
    return values


def _write_csv(path: Path, record: ComparisonRecord) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "family", "mean_quality", "min_quality", "profile"])
        for comp in record.results:
            if comp.skipped is not None:
                writer.writerow([comp.k, "skipped", "", "", ""])
                continue
            for name, fam in (("nash", comp.nash), ("best", comp.best), ("uniform", comp.uniform)):
                if fam is None:
                    writer.writerow([comp.k, name, "", "", ""])
                else:
                    writer.writerow(
                        [
                            comp.k,
                            name,
                            f"{fam.mean_quality:.17g}",
                            f"{fam.min_quality:.17g}",
                            " ".join(str(p) for p in fam.profile),
                        ]
                    )


def run_compare(spec: RunSpec) -> ComparisonRecord:
    """Run the sweep and write the report directory; returns the record."""
    mesh = _load_input(spec)
    out_dir = Path(spec.out_dir)
    mesh_dir = out_dir / "meshes"
    mesh_dir.mkdir(parents=True, exist_ok=True)

    initial_mean, initial_min = mesh_quality(mesh, metric=spec.metric)
    write_off(mesh_dir / "initial.off", mesh)

    results = []
    trajectories: dict[int, list[float]] = {}
    for k in spec.ks:
        comp = _compare_one_k(mesh, spec, k, mesh_dir)
        results.append(comp)
        if comp.skipped is None:
            # Layer coords come back off disk, so the figure shows exactly
            # what the OFF files store (%.17g round-trips float64 exactly).
            layers = [(mesh.coords, INITIAL_COLOR)]
            if comp.nash is not None:
                layers.append((read_mesh(out_dir / comp.nash.mesh_file).coords, NASH_COLOR))
            layers.append((read_mesh(out_dir / comp.best.mesh_file).coords, BEST_COLOR))
            emit_svg(mesh, layers, out_dir / f"compare_k{k}.svg")
            trajectories[k] = _trajectory(mesh, spec, k, initial_mean)

    record = ComparisonRecord(
        spec=spec,
        initial_mean=initial_mean,
        initial_min=initial_min,
        results=tuple(results),
        trajectories=trajectories,
    )
    with open(out_dir / "report.json", "w") as fh:
        json.dump(record.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    _write_csv(out_dir / "sweep.csv", record)

    plot_quality_vs_k(
        [c.to_dict() for c in record.results if c.skipped is None],
        out_dir / "quality_vs_k.png",
        scenario=spec.label,
    )
    if trajectories:
        plot_quality_vs_iterations(
            trajectories, out_dir / "quality_vs_iterations.png", scenario=spec.label
        )
    return record
