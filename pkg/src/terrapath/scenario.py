"""Planning scenarios and the two-phase replanning workflow.

A scenario bundles everything one planning problem needs: a terrain
source, the vehicle, risk weights, endpoints, known enemy cells, and
any routes previous traffic already drove.  Running it solves twice:
phase 1 against the declared history, phase 2 with the phase-1 route
committed as additional history, which is how repeated tasking over
the same ground is modeled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InfeasibleRouteError, ValidationError
from .graph import build_graph
from .risk import CostField, RiskWeights, TacticalPicture, Vehicle, build_cost_field
from .solver import Route, solve_min_cost_path
from .terrain import (
    CellIndex,
    TerrainGrid,
    TerrainParams,
    generate_synthetic_terrain,
    load_ascii_grid,
    scale_rci,
)


@dataclass(frozen=True)
class SyntheticTerrainSpec:
    """Arguments for generate_synthetic_terrain, kept so a scenario can
    rebuild its terrain deterministically."""

    seed: int
    n_rows: int
    n_cols: int
    cell_size: float
    params: TerrainParams = TerrainParams()


@dataclass(frozen=True)
class Scenario:
    """One complete planning problem.

    Exactly one of terrain_path / terrain_spec must be set.  rci_scale,
    when given, multiplies the loaded soil strengths before planning.
    prior_routes seed the history picture for phase 1.
    """

    name: str
    vehicle: Vehicle
    weights: RiskWeights
    start: CellIndex
    end: CellIndex
    terrain_path: str | None = None
    terrain_spec: SyntheticTerrainSpec | None = None
    rci_scale: float | None = None
    enemy_cells: frozenset[CellIndex] = frozenset()
    prior_routes: tuple[tuple[CellIndex, ...], ...] = ()

    def __post_init__(self):
        if (self.terrain_path is None) == (self.terrain_spec is None):
            raise ValidationError(
                f"scenario {self.name!r} must set exactly one of "
                "terrain_path or terrain_spec"
            )
        if self.rci_scale is not None and not (
            math.isfinite(self.rci_scale) and self.rci_scale > 0
        ):
            raise ValidationError(
                f"scenario {self.name!r}: rci_scale must be positive, got {self.rci_scale}"
            )
        object.__setattr__(
            self, "start", CellIndex(int(self.start[0]), int(self.start[1]))
        )
        object.__setattr__(self, "end", CellIndex(int(self.end[0]), int(self.end[1])))
        object.__setattr__(
            self,
            "enemy_cells",
            frozenset(CellIndex(int(r), int(c)) for r, c in self.enemy_cells),
        )
        object.__setattr__(
            self,
            "prior_routes",
            tuple(
                tuple(CellIndex(int(r), int(c)) for r, c in route)
                for route in self.prior_routes
            ),
        )

    def build_terrain(self) -> TerrainGrid:
        if self.terrain_path is not None:
            grid = load_ascii_grid(self.terrain_path)
        else:
            spec = self.terrain_spec
            grid = generate_synthetic_terrain(
                spec.seed, spec.n_rows, spec.n_cols, spec.cell_size, spec.params
            )
        if self.rci_scale is not None:
            grid = scale_rci(grid, self.rci_scale)
        return grid

    def validate_against(self, grid: TerrainGrid) -> None:
        """Raise ValidationError if any referenced cell is off-grid or
        on nodata ground."""
        refs = [("start", self.start), ("end", self.end)]
        refs += [("enemy", c) for c in sorted(self.enemy_cells)]
        refs += [
            ("prior route", c) for route in self.prior_routes for c in route
        ]
        for label, cell in refs:
            if not grid.in_bounds(cell):
                raise ValidationError(
                    f"scenario {self.name!r}: {label} cell {tuple(cell)} outside "
                    f"{grid.n_rows}x{grid.n_cols} grid"
                )
            if not grid.is_passable(cell):
                raise ValidationError(
                    f"scenario {self.name!r}: {label} cell {tuple(cell)} lies on "
                    "nodata ground"
                )

    def history_cells(self) -> frozenset[CellIndex]:
        """Union of all prior-route cells."""
        return frozenset(c for route in self.prior_routes for c in route)


@dataclass(frozen=True)
class RiskBreakdown:
    """Per-component totals over a route's charged cells."""

    soil_risk: float
    history_risk: float
    enemy_risk: float
    mu_total: float

    @property
    def risk_total(self) -> float:
        """Three-term sum without the floor contribution."""
        return self.soil_risk + self.history_risk + self.enemy_risk

    @property
    def combined(self) -> float:
        return self.soil_risk + self.history_risk + self.enemy_risk + self.mu_total


@dataclass(frozen=True)
class RunReport:
    """One phase's outcome: the route plus its risk decomposition.

    length_km follows the uniform-move-length convention: every step
    counts one cell_size regardless of direction, so
    length_km = step_count * cell_size / 1000.
    """

    phase: int
    soil_risk: float
    history_risk: float
    enemy_risk: float
    mu_total: float
    objective: float
    step_count: int
    length_km: float
    route: Route

    def __post_init__(self):
        for name in ("soil_risk", "history_risk", "enemy_risk", "mu_total"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValidationError(f"report component {name} must be >= 0, got {v}")
        total = self.soil_risk + self.history_risk + self.enemy_risk + self.mu_total
        if abs(total - self.objective) > 1e-6 * max(1.0, abs(self.objective)):
            raise ValidationError(
                f"report components sum to {total}, objective is {self.objective}"
            )

    @property
    def risk_total(self) -> float:
        """Sum of the three risk terms, excluding the floor total."""
        return self.soil_risk + self.history_risk + self.enemy_risk


def decompose_risk(route: Route, cost_field: CostField) -> RiskBreakdown:
    """Total each cost component over the route's charged cells.

    The start cell is never charged (a route pays on entering a cell),
    so sums run over cells[1:].  The floor total is step_count times
    the constant floor cost.
    """
    charged = route.cells[1:]
    shape = cost_field.total.shape
    for cell in charged:
        if not (0 <= cell.row < shape[0] and 0 <= cell.col < shape[1]):
            raise ValidationError(f"route cell {tuple(cell)} outside cost field {shape}")
    if charged:
        rows = np.array([c.row for c in charged])
        cols = np.array([c.col for c in charged])
        soil = float(np.sum(cost_field.soil[rows, cols]))
        history = float(np.sum(cost_field.history[rows, cols]))
        enemy = float(np.sum(cost_field.enemy[rows, cols]))
    else:
        soil = history = enemy = 0.0
    return RiskBreakdown(
        soil_risk=soil,
        history_risk=history,
        enemy_risk=enemy,
        mu_total=len(charged) * cost_field.floor_cost,
    )


def build_report(phase: int, route: Route, cost_field: CostField,
                 cell_size: float) -> RunReport:
    parts = decompose_risk(route, cost_field)
    return RunReport(
        phase=phase,
        soil_risk=parts.soil_risk,
        history_risk=parts.history_risk,
        enemy_risk=parts.enemy_risk,
        mu_total=parts.mu_total,
        objective=route.objective,
        step_count=route.step_count,
        length_km=route.step_count * cell_size / 1000.0,
        route=route,
    )


def solve_phase(grid: TerrainGrid, scenario: Scenario,
                history: Iterable[CellIndex]) -> tuple[Route, CostField]:
    """Solve one phase of a scenario against an explicit history set."""
    picture = TacticalPicture(
        enemy_cells=scenario.enemy_cells,
        history_cells=frozenset(history),
    )
    cost = build_cost_field(grid, scenario.vehicle, scenario.weights, picture)
    net = build_graph(cost, grid, scenario.start, scenario.end)
    return solve_min_cost_path(net), cost


def run_two_phase(scenario: Scenario,
                  grid: TerrainGrid | None = None) -> tuple[RunReport, RunReport]:
    """Solve a scenario, commit the result as history, and solve again.

    Returns the phase-1 and phase-2 reports.  With history_weight zero
    the two routes are identical, since committing the first route then
    changes nothing in the cost field.
    """
    if grid is None:
        grid = scenario.build_terrain()
    scenario.validate_against(grid)

    history1 = scenario.history_cells()
    try:
        route1, cost1 = solve_phase(grid, scenario, history1)
    except InfeasibleRouteError as e:
        raise InfeasibleRouteError(f"phase 1: {e}", detail=e.detail) from e
    report1 = build_report(1, route1, cost1, grid.cell_size)

    history2 = history1 | set(route1.cells)
    try:
        route2, cost2 = solve_phase(grid, scenario, history2)
    except InfeasibleRouteError as e:
        raise InfeasibleRouteError(f"phase 2: {e}", detail=e.detail) from e
    report2 = build_report(2, route2, cost2, grid.cell_size)

    return report1, report2


@dataclass(frozen=True)
class SuiteResult:
    """Outcome of one scenario inside a suite run.

    Exactly one of (phase1, phase2) both set, or error set.  error_kind
    is "validation" or "infeasible" so callers can map failures to exit
    codes without parsing messages.
    """

    scenario: Scenario
    phase1: RunReport | None = None
    phase2: RunReport | None = None
    error: str | None = None
    error_kind: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def reports(self) -> tuple[RunReport, RunReport]:
        if not self.ok:
            raise ValidationError(f"scenario {self.scenario.name!r} failed: {self.error}")
        return (self.phase1, self.phase2)


def run_suite(scenarios: Sequence[Scenario]) -> list[SuiteResult]:
    """Run every scenario's two-phase workflow, isolating failures.

    Results come back sorted by scenario name so output order does not
    depend on input order or execution order.
    """
    names = [s.name for s in scenarios]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise ValidationError(f"duplicate scenario names: {sorted(dupes)}")

    results = []
    for scn in sorted(scenarios, key=lambda s: s.name):
        try:
            rep1, rep2 = run_two_phase(scn)
        except InfeasibleRouteError as e:
            results.append(
                SuiteResult(scenario=scn, error=str(e), error_kind="infeasible")
            )
        except (ValidationError, OSError) as e:
            results.append(
                SuiteResult(scenario=scn, error=str(e), error_kind="validation")
            )
        else:
            results.append(SuiteResult(scenario=scn, phase1=rep1, phase2=rep2))
    return results
