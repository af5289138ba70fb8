"""Command-line front end.

Subcommands: solve, suite, gen-terrain, verify.  Exit codes are a
stable contract: 0 success, 1 validation or usage error, 2 infeasible
route, 3 verification failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import InfeasibleRouteError, ValidationError
from .graph import build_graph
from .risk import TacticalPicture, build_cost_field
from .scenario import (
    Scenario,
    SuiteResult,
    decompose_risk,
    run_suite,
    run_two_phase,
    solve_phase,
)
from .solver import Route, verify_flow_constraints
from .terrain import TerrainParams, generate_synthetic_terrain, save_ascii_grid

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY_FAILED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="terrapath",
        description="Minimum-risk route planning over soil-strength rasters.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="solve one scenario's two-phase workflow")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--out-route", help="route export path (phase suffix added for --phase both)")
    p.add_argument("--out-report", help="report CSV path (always holds both phases)")
    p.add_argument("--phase", choices=["1", "2", "both"], default="both",
                   help="which phase's route to export and print (default both)")
    p.add_argument("--route-format", choices=["csv", "geojson"], default="csv")
    p.add_argument("--vci50", type=float, help="override vehicle vci50")
    p.add_argument("--P", type=float, help="override soil weight")
    p.add_argument("--H", type=float, help="override history weight")
    p.add_argument("--R", type=float, help="override enemy weight")

    p = sub.add_parser("suite", help="run a suite of scenarios")
    p.add_argument("--suite", required=True, help="suite JSON file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--route-format", choices=["csv", "geojson"], default="csv")

    p = sub.add_parser("gen-terrain", help="write a synthetic soil-strength grid")
    p.add_argument("--out", required=True, help="output ASCII grid path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", type=int, default=100)
    p.add_argument("--cols", type=int, default=100)
    p.add_argument("--cell-size", type=float, default=100.0)
    p.add_argument("--base-rci", type=float, default=TerrainParams().base_rci)
    p.add_argument("--valley-depth", type=float, default=TerrainParams().valley_depth)
    p.add_argument("--valley-count", type=int, default=TerrainParams().valley_count)
    p.add_argument("--smoothness", type=float, default=TerrainParams().smoothness)

    p = sub.add_parser("verify", help="check a route file against a scenario")
    p.add_argument("--scenario", required=True, help="scenario JSON file")
    p.add_argument("--route", required=True, help="route CSV produced by solve")
    p.add_argument("--phase", choices=["1", "2"], default="1",
                   help="which phase's tactical picture to price the route against")

    return parser


def _apply_overrides(scenario: Scenario, args) -> Scenario:
    vehicle = scenario.vehicle
    weights = scenario.weights
    if args.vci50 is not None:
        vehicle = dataclasses.replace(vehicle, vci50=args.vci50)
    if args.P is not None:
        weights = dataclasses.replace(weights, soil_weight=args.P)
    if args.H is not None:
        weights = dataclasses.replace(weights, history_weight=args.H)
    if args.R is not None:
        weights = dataclasses.replace(weights, enemy_weight=args.R)
    return dataclasses.replace(scenario, vehicle=vehicle, weights=weights)


def _phase_path(base: str, phase: int, both: bool) -> Path:
    path = Path(base)
    if not both:
        return path
    return path.with_name(f"{path.stem}_phase{phase}{path.suffix}")


def _summary_line(name: str, report) -> str:
    return (
        f"{name} phase {report.phase}: objective={report.objective!r} "
        f"steps={report.step_count} length_km={report.length_km!r}"
    )


def _cmd_solve(args) -> int:
    scenario = _apply_overrides(io.load_scenario(args.scenario), args)
    grid = scenario.build_terrain()
    rep1, rep2 = run_two_phase(scenario, grid)

    wanted = {"1": (rep1,), "2": (rep2,), "both": (rep1, rep2)}[args.phase]
    for report in wanted:
        print(_summary_line(scenario.name, report))
        if args.out_route:
            path = _phase_path(args.out_route, report.phase, args.phase == "both")
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(io.export_route(report.route, grid, args.route_format))
    if args.out_report:
        result = SuiteResult(scenario=scenario, phase1=rep1, phase2=rep2)
        path = Path(args.out_report)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(io.export_report([result]))
    return EXIT_OK


def _cmd_suite(args) -> int:
    scenarios = io.load_suite(args.suite)
    results = run_suite(scenarios)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.csv").write_text(io.export_report(results))

    failures = []
    for result in results:
        if not result.ok:
            failures.append(result)
            print(f"{result.scenario.name}: {result.error}", file=sys.stderr)
            continue
        grid = result.scenario.build_terrain()
        ext = "csv" if args.route_format == "csv" else "geojson"
        for report in (result.phase1, result.phase2):
            print(_summary_line(result.scenario.name, report))
            path = out_dir / f"{result.scenario.name}_phase{report.phase}.{ext}"
            path.write_text(io.export_route(report.route, grid, args.route_format))

    if any(f.error_kind == "validation" for f in failures):
        return EXIT_VALIDATION
    if failures:
        return EXIT_INFEASIBLE
    return EXIT_OK


def _cmd_gen_terrain(args) -> int:
    params = TerrainParams(
        base_rci=args.base_rci,
        valley_depth=args.valley_depth,
        valley_count=args.valley_count,
        smoothness=args.smoothness,
    )
    grid = generate_synthetic_terrain(
        args.seed, args.rows, args.cols, args.cell_size, params
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_ascii_grid(grid, out)
    valid = grid.rci[~grid.nodata_mask]
    print(
        f"wrote {grid.n_rows}x{grid.n_cols} grid to {out} "
        f"(rci {float(valid.min())!r}..{float(valid.max())!r})"
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    scenario = io.load_scenario(args.scenario)
    cells = io.parse_route_csv(Path(args.route).read_text())
    grid = scenario.build_terrain()
    scenario.validate_against(grid)

    history = scenario.history_cells()
    if args.phase == "2":
        route1, _ = solve_phase(grid, scenario, history)
        history = history | set(route1.cells)
    picture = TacticalPicture(enemy_cells=scenario.enemy_cells, history_cells=history)
    field = build_cost_field(grid, scenario.vehicle, scenario.weights, picture)
    net = build_graph(field, grid, scenario.start, scenario.end)

    check = verify_flow_constraints(net, cells)
    for name in ("source", "sink", "balance", "arcs"):
        result = getattr(check, name)
        print(f"{name}: {'ok' if result.passed else 'FAIL - ' + result.detail}")
    if not check.all_passed:
        return EXIT_VERIFY_FAILED

    rows = np.array([c.row for c in cells[1:]], dtype=np.int64)
    cols = np.array([c.col for c in cells[1:]], dtype=np.int64)
    objective = float(np.sum(field.total[rows, cols])) if len(cells) > 1 else 0.0
    parts = decompose_risk(Route(cells=cells, objective=objective), field)
    drift = abs(parts.combined - objective)
    ok = drift <= 1e-6 * max(1.0, abs(objective))
    print(
        f"decomposition: {'ok' if ok else 'FAIL'} "
        f"(soil={parts.soil_risk!r} history={parts.history_risk!r} "
        f"enemy={parts.enemy_risk!r} floor={parts.mu_total!r} "
        f"objective={objective!r})"
    )
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_VALIDATION

    try:
        if args.cmd == "solve":
            return _cmd_solve(args)
        if args.cmd == "suite":
            return _cmd_suite(args)
        if args.cmd == "gen-terrain":
            return _cmd_gen_terrain(args)
        if args.cmd == "verify":
            return _cmd_verify(args)
        raise AssertionError(f"unhandled subcommand {args.cmd}")
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except InfeasibleRouteError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
