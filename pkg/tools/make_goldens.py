#!/usr/bin/env python3
"""Regenerate the committed golden outputs under tests/goldens/.

Two artifacts are produced:

  tests/goldens/table2/         report.csv plus one route CSV per run
                                and phase of the bundled 17-run
                                sensitivity suite (suites/table2.json)
  tests/goldens/golden_terrain.asc
                                the reference synthetic terrain, via
                                the gen-terrain command

Every route is cross-checked before it is accepted: the solver's
objective must equal an independent value-iteration recomputation
bit-for-bit, the route must pass the flow-constraint verifier, and the
emitted CSV must parse back to the exact cell sequence.  A failure
aborts with a nonzero exit so stale goldens are never committed.
"""

from __future__ import annotations

import sys
from pathlib import Path

import terrapath as tp
from terrapath.cli import main as cli_main
from terrapath.graph import build_graph

ROOT = Path(__file__).resolve().parent.parent
SUITE = ROOT / "suites" / "table2.json"
OUT_DIR = ROOT / "tests" / "goldens" / "table2"
TERRAIN_OUT = ROOT / "tests" / "goldens" / "golden_terrain.asc"


def check_route(route, field, grid, scenario, emitted: Path) -> None:
    net = build_graph(field, grid, scenario.start, scenario.end)
    recomputed = tp.oracle_cost(net)
    if recomputed != route.objective:
        raise SystemExit(
            f"{emitted.name}: solver objective {route.objective!r} "
            f"!= value-iteration objective {recomputed!r}"
        )
    check = tp.verify_flow_constraints(net, route)
    if not check.all_passed:
        raise SystemExit(f"{emitted.name}: " + "; ".join(check.failures()))
    parsed = tp.parse_route_csv(emitted.read_text())
    if parsed != route.cells:
        raise SystemExit(f"{emitted.name}: emitted CSV does not match solved route")


def main() -> int:
    code = cli_main(["suite", "--suite", str(SUITE), "--out", str(OUT_DIR)])
    if code != 0:
        raise SystemExit(f"suite command failed with exit code {code}")

    scenarios = tp.load_suite(SUITE)
    for scenario in scenarios:
        grid = scenario.build_terrain()
        history = scenario.history_cells()
        route1, field1 = tp.solve_phase(grid, scenario, history)
        check_route(route1, field1, grid, scenario,
                    OUT_DIR / f"{scenario.name}_phase1.csv")
        route2, field2 = tp.solve_phase(grid, scenario,
                                        history | set(route1.cells))
        check_route(route2, field2, grid, scenario,
                    OUT_DIR / f"{scenario.name}_phase2.csv")
    print(f"verified {len(scenarios)} runs x 2 phases in {OUT_DIR}")

    code = cli_main([
        "gen-terrain", "--out", str(TERRAIN_OUT),
        "--seed", "0", "--rows", "100", "--cols", "100", "--cell-size", "100",
        "--base-rci", "80", "--valley-depth", "70", "--valley-count", "3",
        "--smoothness", "6",
    ])
    if code != 0:
        raise SystemExit(f"gen-terrain command failed with exit code {code}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
