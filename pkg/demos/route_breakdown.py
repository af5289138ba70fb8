"""Solve one scenario and break the objective into its risk components.

The objective of a route is the sum over entered cells of soil,
history, and enemy penalties plus the per-step floor. This script
solves a first-pass route, prints that decomposition, re-sums it
against the objective, and lists the most expensive cells so you can
see where the route pays.
"""

import numpy as np

import terrapath as tp


def main() -> None:
    spec = tp.SyntheticTerrainSpec(
        seed=0, n_rows=100, n_cols=100, cell_size=100.0,
        params=tp.TerrainParams(base_rci=80.0, valley_depth=70.0,
                                valley_count=3, smoothness=6.0),
    )
    scenario = tp.Scenario(
        name="breakdown",
        vehicle=tp.Vehicle("tracked-engineer", vci50=54.0),
        weights=tp.RiskWeights(),
        start=(0, 0),
        end=(99, 99),
        terrain_spec=spec,
        enemy_cells=[(55, 55)],
    )
    grid = scenario.build_terrain()
    route, field = tp.solve_phase(grid, scenario, history=())

    parts = tp.decompose_risk(route, field)
    report = tp.build_report(1, route, field, grid.cell_size)
    print(f"route: {report.step_count} steps, {report.length_km:.1f} km")
    print(f"  soil risk     {parts.soil_risk:14.4f}")
    print(f"  history risk  {parts.history_risk:14.4f}")
    print(f"  enemy risk    {parts.enemy_risk:14.4f}")
    print(f"  step floor    {parts.mu_total:14.4f}")
    print(f"  objective     {route.objective:14.4f}")
    resummed = parts.soil_risk + parts.history_risk + parts.enemy_risk \
        + parts.mu_total
    print(f"  components re-sum to {resummed:.10f} "
          f"(drift {abs(resummed - route.objective):.2e})")

    entered = route.cells[1:]
    costs = np.array([field.total[c] for c in entered])
    order = np.argsort(costs)[::-1]
    print()
    print("five costliest cells entered:")
    for k in order[:5]:
        r, c = entered[k]
        print(f"  ({r:2d},{c:2d}) cost {costs[k]:10.4f} "
              f"rci {grid.rci[r, c]:6.2f}")


if __name__ == "__main__":
    main()
