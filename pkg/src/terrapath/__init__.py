"""Minimum-risk route planning over rasterized soil-strength maps."""

from .errors import (
    GridParseError,
    InfeasibleRouteError,
    ScenarioError,
    ValidationError,
)
from .graph import NEIGHBOR_OFFSETS, GridGraph, build_graph, neighbors
from .io import (
    REPORT_COLUMNS,
    SCHEMA_VERSION,
    export_report,
    export_route,
    load_scenario,
    load_suite,
    parse_route_csv,
    parse_scenario,
    save_scenario,
    scenario_to_doc,
)
from .risk import (
    CostField,
    RiskWeights,
    TacticalPicture,
    Vehicle,
    build_cost_field,
    distance_to_nearest,
    proximity_penalty,
    soil_penalty,
)
from .scenario import (
    RiskBreakdown,
    RunReport,
    Scenario,
    SuiteResult,
    SyntheticTerrainSpec,
    build_report,
    decompose_risk,
    run_suite,
    run_two_phase,
    solve_phase,
)
from .solver import (
    ConstraintCheck,
    FlowCheckReport,
    Route,
    cost_to_go,
    oracle_cost,
    solve_min_cost_path,
    verify_flow_constraints,
)
from .terrain import (
    CellIndex,
    TerrainGrid,
    TerrainParams,
    generate_synthetic_terrain,
    load_ascii_grid,
    parse_ascii_grid,
    save_ascii_grid,
    scale_rci,
    serialize_ascii_grid,
)

__version__ = "0.1.0"

__all__ = [
    "CellIndex",
    "ConstraintCheck",
    "CostField",
    "FlowCheckReport",
    "GridGraph",
    "GridParseError",
    "InfeasibleRouteError",
    "NEIGHBOR_OFFSETS",
    "REPORT_COLUMNS",
    "RiskBreakdown",
    "RiskWeights",
    "Route",
    "RunReport",
    "SCHEMA_VERSION",
    "Scenario",
    "ScenarioError",
    "SuiteResult",
    "SyntheticTerrainSpec",
    "TacticalPicture",
    "TerrainGrid",
    "TerrainParams",
    "ValidationError",
    "Vehicle",
    "build_cost_field",
    "build_graph",
    "build_report",
    "cost_to_go",
    "decompose_risk",
    "distance_to_nearest",
    "export_report",
    "export_route",
    "generate_synthetic_terrain",
    "load_ascii_grid",
    "load_scenario",
    "load_suite",
    "neighbors",
    "oracle_cost",
    "parse_ascii_grid",
    "parse_route_csv",
    "parse_scenario",
    "proximity_penalty",
    "run_suite",
    "run_two_phase",
    "save_ascii_grid",
    "save_scenario",
    "scale_rci",
    "scenario_to_doc",
    "serialize_ascii_grid",
    "soil_penalty",
    "solve_min_cost_path",
    "solve_phase",
    "verify_flow_constraints",
    "__version__",
]
