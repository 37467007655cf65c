"""Command-line interface.

Subcommands:
  scenario  generate a built-in fan mesh and write it as OFF
  smooth    run iterated smoothing on a mesh or scenario
  compare   sweep k and compare equilibrium, best, and uniform profiles

Exit codes: 0 success, 1 I/O or argument errors, 2 enumeration budget
refusal (the profile space is too large for the exhaustive solver).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .fileio import MeshParseError, read_mesh, write_off
from .game import DEFAULT_ENUMERATION_BUDGET, EnumerationBudgetError, GameConfig
from .mesh import Mesh, MeshBuildError, mesh_quality
from .report import RunSpec, run_compare
from .scenarios import SCENARIO_NAMES, generate_scenario
from .smoothing import (
    SMOOTHING_MODES,
    SOLVERS,
    SmoothingConfig,
    SmoothingError,
    smooth,
)
from .transform import EQUILATERAL_THETA, TransformParams

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2


def _add_game_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--k", type=int, default=3, help="maximum transform power (default 3)")
    sub.add_argument(
        "--metric",
        default="min_max_edge",
        choices=("min_max_edge", "mean_ratio"),
        help="element quality measure (default min_max_edge)",
    )
    sub.add_argument(
        "--fix-boundary",
        action="store_true",
        help="keep boundary vertices at their input positions",
    )
    sub.add_argument(
        "--theta",
        type=float,
        default=EQUILATERAL_THETA,
        help="transform height coefficient (default sqrt(3)/2)",
    )
    sub.add_argument(
        "--no-preserve-area",
        action="store_true",
        help="skip rescaling transformed elements back to their input area",
    )


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=0, help="scenario perturbation seed")
    sub.add_argument(
        "--out-dir", type=Path, default=Path("."), help="output directory (default .)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meshgame",
        description="Triangle mesh smoothing as a finite game between elements.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_scenario = subparsers.add_parser(
        "scenario", help="generate a built-in fan mesh as OFF"
    )
    p_scenario.add_argument("name", help=f"one of {', '.join(SCENARIO_NAMES)}")
    _add_common_flags(p_scenario)

    p_smooth = subparsers.add_parser(
        "smooth", help="run iterated smoothing on a mesh file or scenario"
    )
    p_smooth.add_argument("input", help="mesh file (.off/.obj) or scenario name")
    _add_game_flags(p_smooth)
    p_smooth.add_argument(
        "--q", type=float, default=0.95, help="target minimum element quality (default 0.95)"
    )
    p_smooth.add_argument(
        "--mode",
        default="global_iterated",
        choices=SMOOTHING_MODES,
        help="whole-mesh iteration or worst-element repair (default global_iterated)",
    )
    p_smooth.add_argument(
        "--solver",
        default="exhaustive",
        choices=SOLVERS,
        help="equilibrium solver (default exhaustive)",
    )
    p_smooth.add_argument(
        "--max-iterations", type=int, default=50, help="iteration budget (default 50)"
    )
    _add_common_flags(p_smooth)

    p_compare = subparsers.add_parser(
        "compare", help="sweep k and compare equilibrium, best, and uniform profiles"
    )
    p_compare.add_argument("input", help="mesh file (.off/.obj) or scenario name")
    _add_game_flags(p_compare)
    p_compare.add_argument(
        "--q", type=float, default=0.95, help="trajectory target quality (default 0.95)"
    )
    p_compare.add_argument(
        "--max-iterations",
        type=int,
        default=8,
        help="trajectory iteration budget (default 8)",
    )
    p_compare.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_ENUMERATION_BUDGET,
        help="maximum profiles to enumerate per k",
    )
    _add_common_flags(p_compare)
    return parser


def _load_input(name_or_path: str, seed: int) -> tuple[Mesh, str]:
    if name_or_path in SCENARIO_NAMES:
        return generate_scenario(name_or_path, seed=seed), name_or_path
    return read_mesh(name_or_path), Path(name_or_path).stem


def _cmd_scenario(args) -> int:
    mesh = generate_scenario(args.name, seed=args.seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    path = args.out_dir / f"{args.name}.off"
    write_off(path, mesh)
    mean_q, min_q = mesh_quality(mesh)
    print(f"{path}: {mesh.n_vertices} vertices, {mesh.n_elements} triangles")
    print(f"quality mean={mean_q:.6f} min={min_q:.6f}")
    return EXIT_OK


def _cmd_smooth(args) -> int:
    mesh, label = _load_input(args.input, args.seed)
    config = SmoothingConfig(
        game=GameConfig(
            k=args.k,
            transform=TransformParams(
                theta=args.theta, preserve_area=not args.no_preserve_area
            ),
            metric=args.metric,
            fix_boundary=args.fix_boundary,
        ),
        mode=args.mode,
        target_quality=args.q,
        max_iterations=args.max_iterations,
        solver=args.solver,
    )
    result = smooth(mesh, config)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    mesh_path = args.out_dir / f"{label}_smoothed.off"
    write_off(mesh_path, mesh, coords=result.final_coords)
    record = {
        "input": args.input,
        "config": {
            "k": args.k,
            "q": args.q,
            "mode": args.mode,
            "solver": args.solver,
            "metric": args.metric,
            "fix_boundary": args.fix_boundary,
        },
        "terminated_by": result.terminated_by,
        "final": {
            "mean_quality": result.final_mean_quality,
            "min_quality": result.final_min_quality,
            "mesh_file": mesh_path.name,
        },
        "iterations": [
            {
                "index": rec.index,
                "profile": list(rec.profile) if rec.profile is not None else None,
                "mean_quality": rec.mean_quality,
                "min_quality": rec.min_quality,
            }
            for rec in result.iterations
        ],
    }
    json_path = args.out_dir / f"{label}_smoothing.json"
    with open(json_path, "w") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"{label}: {result.terminated_by} after {len(result.iterations)} iterations")
    print(
        f"quality mean={result.final_mean_quality:.6f} min={result.final_min_quality:.6f}"
    )
    print(f"wrote {mesh_path} and {json_path}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    if args.input in SCENARIO_NAMES:
        scenario, mesh_path = args.input, None
    else:
        scenario, mesh_path = None, args.input
    spec = RunSpec(
        out_dir=args.out_dir,
        scenario=scenario,
        mesh_path=mesh_path,
        seed=args.seed,
        ks=tuple(range(1, args.k + 1)),
        metric=args.metric,
        fix_boundary=args.fix_boundary,
        transform=TransformParams(
            theta=args.theta, preserve_area=not args.no_preserve_area
        ),
        target_quality=args.q,
        max_iterations=args.max_iterations,
        budget=args.budget,
    )
    record = run_compare(spec)
    for comp in record.results:
        if comp.skipped is not None:
            print(f"k={comp.k}: skipped ({comp.skipped})")
            continue
        nash = f"{comp.nash.mean_quality:.6f}" if comp.nash else "none"
        print(
            f"k={comp.k}: nash={nash} best={comp.best.mean_quality:.6f} "
            f"uniform={comp.uniform.mean_quality:.6f} "
            f"({comp.equilibrium_count} equilibria)"
        )
    print(f"wrote report to {args.out_dir}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; keep 2 reserved for budget
        # refusals and report usage problems as ordinary errors.
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    try:
        if args.command == "scenario":
            return _cmd_scenario(args)
        if args.command == "smooth":
            return _cmd_smooth(args)
        return _cmd_compare(args)
    except EnumerationBudgetError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_BUDGET
    except (MeshParseError, MeshBuildError, SmoothingError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


def run() -> None:
    sys.exit(main())
