"""Scenario documents, route exports, and report tables.

Scenario files are JSON with a strict schema: unknown keys are
rejected so a typo in a coefficient name cannot silently fall back to
a default.  The only defaulted numeric field is the floor cost ``mu``
(0.1).  Weight keys are the short names used throughout the scenario
files: P (soil), H (history), R (enemy), k_h / k_r (decay lengths in
cells), mu (floor).

Route and report exports are plain text with repr()-formatted floats,
so re-parsing a file recovers the original values exactly and equal
inputs always produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ScenarioError, ValidationError
from .risk import RiskWeights, Vehicle
from .scenario import RunReport, Scenario, SuiteResult, SyntheticTerrainSpec
from .solver import Route
from .terrain import CellIndex, TerrainGrid, TerrainParams

SCHEMA_VERSION = 1

# Wire key <-> RiskWeights field. The file format keeps the short
# names; code uses the descriptive ones.
_WEIGHT_KEYS = {
    "P": "soil_weight",
    "H": "history_weight",
    "R": "enemy_weight",
    "k_h": "history_decay",
    "k_r": "enemy_decay",
    "mu": "floor_cost",
}

_SYNTH_KEYS = ("seed", "n_rows", "n_cols", "cell_size",
               "base_rci", "valley_depth", "valley_count", "smoothness")

REPORT_COLUMNS = (
    "scenario", "phase", "vci50", "P", "H", "R",
    "soil_risk", "history_risk", "enemy_risk", "mu_total",
    "risk_total", "objective", "step_count", "length_km",
)


def _check_keys(obj: dict, required: Sequence[str], optional: Sequence[str],
                where: str) -> None:
    if not isinstance(obj, dict):
        raise ScenarioError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = sorted(set(obj) - set(required) - set(optional))
    if unknown:
        raise ScenarioError(f"{where}: unknown fields: {', '.join(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise ScenarioError(f"{where}: missing fields: {', '.join(missing)}")


def _number(obj: dict, key: str, where: str, *, minimum: float | None = None,
            exclusive: bool = False) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{where}.{key}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ScenarioError(f"{where}.{key}: must be finite, got {value}")
    if minimum is not None:
        if exclusive and not value > minimum:
            raise ScenarioError(f"{where}.{key}: must be > {minimum}, got {value}")
        if not exclusive and not value >= minimum:
            raise ScenarioError(f"{where}.{key}: must be >= {minimum}, got {value}")
    return value


def _integer(obj: dict, key: str, where: str, *, minimum: int | None = None) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{where}.{key}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(f"{where}.{key}: must be >= {minimum}, got {value}")
    return value


def _cell(value, where: str) -> CellIndex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or any(isinstance(v, bool) or not isinstance(v, int) for v in value)
    ):
        raise ScenarioError(f"{where}: expected [row, col] integers, got {value!r}")
    return CellIndex(value[0], value[1])


def _parse_weights(obj: dict, where: str) -> RiskWeights:
    _check_keys(obj, ["P", "H", "R", "k_h", "k_r"], ["mu"], where)
    return RiskWeights(
        soil_weight=_number(obj, "P", where, minimum=0.0),
        history_weight=_number(obj, "H", where, minimum=0.0),
        enemy_weight=_number(obj, "R", where, minimum=0.0),
        history_decay=_number(obj, "k_h", where, minimum=0.0, exclusive=True),
        enemy_decay=_number(obj, "k_r", where, minimum=0.0, exclusive=True),
        floor_cost=(
            _number(obj, "mu", where, minimum=0.0, exclusive=True)
            if "mu" in obj else 0.1
        ),
    )


def _parse_vehicle(obj: dict, where: str) -> Vehicle:
    _check_keys(obj, ["name", "vci50"], [], where)
    if not isinstance(obj["name"], str) or not obj["name"]:
        raise ScenarioError(f"{where}.name: expected a non-empty string")
    return Vehicle(name=obj["name"], vci50=_number(obj, "vci50", where, minimum=0.0,
                                                   exclusive=True))


def _parse_terrain(obj: dict, where: str, base_dir: Path | None):
    _check_keys(obj, [], ["path", "synthetic", "rci_scale"], where)
    has_path = "path" in obj
    has_synth = "synthetic" in obj
    if has_path == has_synth:
        raise ScenarioError(f"{where}: set exactly one of 'path' or 'synthetic'")
    rci_scale = None
    if "rci_scale" in obj:
        rci_scale = _number(obj, "rci_scale", where, minimum=0.0, exclusive=True)

    if has_path:
        if not isinstance(obj["path"], str) or not obj["path"]:
            raise ScenarioError(f"{where}.path: expected a non-empty string")
        path = Path(obj["path"])
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        return str(path), None, rci_scale

    synth = obj["synthetic"]
    sw = f"{where}.synthetic"
    _check_keys(synth, ["seed", "n_rows", "n_cols", "cell_size"],
                ["base_rci", "valley_depth", "valley_count", "smoothness"], sw)
    defaults = TerrainParams()
    try:
        params = TerrainParams(
            base_rci=_number(synth, "base_rci", sw, minimum=0.0)
            if "base_rci" in synth else defaults.base_rci,
            valley_depth=_number(synth, "valley_depth", sw, minimum=0.0)
            if "valley_depth" in synth else defaults.valley_depth,
            valley_count=_integer(synth, "valley_count", sw, minimum=0)
            if "valley_count" in synth else defaults.valley_count,
            smoothness=_number(synth, "smoothness", sw, minimum=0.0, exclusive=True)
            if "smoothness" in synth else defaults.smoothness,
        )
    except ValidationError as e:
        raise ScenarioError(f"{sw}: {e}") from None
    spec = SyntheticTerrainSpec(
        seed=_integer(synth, "seed", sw, minimum=0),
        n_rows=_integer(synth, "n_rows", sw, minimum=2),
        n_cols=_integer(synth, "n_cols", sw, minimum=2),
        cell_size=_number(synth, "cell_size", sw, minimum=0.0, exclusive=True),
        params=params,
    )
    return None, spec, rci_scale


def parse_scenario(doc: dict, *, default_name: str = "scenario",
                   base_dir: Path | None = None, require_name: bool = False,
                   with_version: bool = True, where: str = "scenario") -> Scenario:
    """Build a Scenario from a parsed JSON document.

    Strict: every key must be recognized.  base_dir anchors relative
    terrain paths (normally the directory of the file the document came
    from).
    """
    required = ["terrain", "vehicle", "weights", "start", "end"]
    optional = ["name", "enemy", "prior_routes"]
    if with_version:
        required = ["schema_version"] + required
    if require_name:
        required.append("name")
        optional.remove("name")
    _check_keys(doc, required, optional, where)

    if with_version:
        version = _integer(doc, "schema_version", where)
        if version != SCHEMA_VERSION:
            raise ScenarioError(
                f"{where}.schema_version: expected {SCHEMA_VERSION}, got {version}"
            )
    name = doc.get("name", default_name)
    if not isinstance(name, str) or not name:
        raise ScenarioError(f"{where}.name: expected a non-empty string")

    terrain_path, terrain_spec, rci_scale = _parse_terrain(
        doc["terrain"], f"{where}.terrain", base_dir
    )
    vehicle = _parse_vehicle(doc["vehicle"], f"{where}.vehicle")
    weights = _parse_weights(doc["weights"], f"{where}.weights")
    start = _cell(doc["start"], f"{where}.start")
    end = _cell(doc["end"], f"{where}.end")

    enemy = doc.get("enemy", [])
    if not isinstance(enemy, list):
        raise ScenarioError(f"{where}.enemy: expected a list of [row, col] cells")
    enemy_cells = frozenset(
        _cell(c, f"{where}.enemy[{i}]") for i, c in enumerate(enemy)
    )

    priors = doc.get("prior_routes", [])
    if not isinstance(priors, list):
        raise ScenarioError(f"{where}.prior_routes: expected a list of cell lists")
    prior_routes = []
    for i, route in enumerate(priors):
        if not isinstance(route, list) or not route:
            raise ScenarioError(
                f"{where}.prior_routes[{i}]: expected a non-empty list of cells"
            )
        prior_routes.append(tuple(
            _cell(c, f"{where}.prior_routes[{i}][{j}]") for j, c in enumerate(route)
        ))

    return Scenario(
        name=name,
        vehicle=vehicle,
        weights=weights,
        start=start,
        end=end,
        terrain_path=terrain_path,
        terrain_spec=terrain_spec,
        rci_scale=rci_scale,
        enemy_cells=enemy_cells,
        prior_routes=tuple(prior_routes),
    )


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path}: not valid JSON: {e}") from None
    return parse_scenario(doc, default_name=path.stem, base_dir=path.parent)


def scenario_to_doc(scenario: Scenario, *, with_version: bool = True) -> dict:
    """Canonical document form: fixed key order, enemy cells sorted."""
    doc: dict = {}
    if with_version:
        doc["schema_version"] = SCHEMA_VERSION
    doc["name"] = scenario.name
    terrain: dict = {}
    if scenario.terrain_path is not None:
        terrain["path"] = scenario.terrain_path
    else:
        spec = scenario.terrain_spec
        terrain["synthetic"] = {
            "seed": spec.seed,
            "n_rows": spec.n_rows,
            "n_cols": spec.n_cols,
            "cell_size": spec.cell_size,
            "base_rci": spec.params.base_rci,
            "valley_depth": spec.params.valley_depth,
            "valley_count": spec.params.valley_count,
            "smoothness": spec.params.smoothness,
        }
    if scenario.rci_scale is not None:
        terrain["rci_scale"] = scenario.rci_scale
    doc["terrain"] = terrain
    doc["vehicle"] = {"name": scenario.vehicle.name, "vci50": scenario.vehicle.vci50}
    doc["weights"] = {
        "P": scenario.weights.soil_weight,
        "H": scenario.weights.history_weight,
        "R": scenario.weights.enemy_weight,
        "k_h": scenario.weights.history_decay,
        "k_r": scenario.weights.enemy_decay,
        "mu": scenario.weights.floor_cost,
    }
    doc["start"] = [scenario.start.row, scenario.start.col]
    doc["end"] = [scenario.end.row, scenario.end.col]
    doc["enemy"] = [[c.row, c.col] for c in sorted(scenario.enemy_cells)]
    doc["prior_routes"] = [
        [[c.row, c.col] for c in route] for route in scenario.prior_routes
    ]
    return doc


def save_scenario(scenario: Scenario, path: str | Path | None = None) -> str:
    text = json.dumps(scenario_to_doc(scenario), indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_suite(path: str | Path) -> list[Scenario]:
    """Read a suite file: {"schema_version": 1, "scenarios": [...]}.

    Each entry is a scenario document without its own schema_version
    and with a mandatory, unique name.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path}: not valid JSON: {e}") from None
    _check_keys(doc, ["schema_version", "scenarios"], [], "suite")
    version = _integer(doc, "schema_version", "suite")
    if version != SCHEMA_VERSION:
        raise ScenarioError(f"suite.schema_version: expected {SCHEMA_VERSION}, got {version}")
    if not isinstance(doc["scenarios"], list):
        raise ScenarioError("suite.scenarios: expected a list")
    scenarios = []
    seen = set()
    for i, entry in enumerate(doc["scenarios"]):
        scn = parse_scenario(
            entry,
            base_dir=path.parent,
            require_name=True,
            with_version=False,
            where=f"suite.scenarios[{i}]",
        )
        if scn.name in seen:
            raise ScenarioError(f"suite.scenarios[{i}]: duplicate name {scn.name!r}")
        seen.add(scn.name)
        scenarios.append(scn)
    return scenarios


def export_route(route: Route, grid: TerrainGrid, format: str = "csv") -> str:
    """Render a route as CSV rows or a GeoJSON LineString.

    CSV columns are step,row,col,easting,northing; coordinates are the
    cell centers in the grid's map units.
    """
    if format not in ("csv", "geojson"):
        raise ValidationError(f"unknown route export format: {format!r}")
    for cell in route.cells:
        if not grid.in_bounds(cell):
            raise ValidationError(f"route cell {tuple(cell)} outside grid")

    if format == "csv":
        lines = ["step,row,col,easting,northing"]
        for step, cell in enumerate(route.cells):
            east, north = grid.cell_center(cell)
            lines.append(f"{step},{cell.row},{cell.col},{east!r},{north!r}")
        return "\n".join(lines) + "\n"

    coords = [list(grid.cell_center(c)) for c in route.cells]
    feature = {
        "type": "Feature",
        "geometry": {"type": "LineString", "coordinates": coords},
        "properties": {
            "objective": route.objective,
            "step_count": route.step_count,
        },
    }
    return json.dumps(feature) + "\n"


def parse_route_csv(text: str) -> tuple[CellIndex, ...]:
    """Read back the cell sequence from an export_route CSV."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].split(",")[:3] != ["step", "row", "col"]:
        raise ValidationError("route CSV must start with header step,row,col,...")
    cells = []
    for n, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) < 3:
            raise ValidationError(f"route CSV line {n}: expected step,row,col,... fields")
        try:
            cells.append(CellIndex(int(parts[1]), int(parts[2])))
        except ValueError:
            raise ValidationError(
                f"route CSV line {n}: row/col must be integers, got {parts[1]!r},{parts[2]!r}"
            ) from None
    if not cells:
        raise ValidationError("route CSV holds no cells")
    return tuple(cells)


def _report_row(name: str, scenario: Scenario, report: RunReport) -> str:
    values = (
        name,
        report.phase,
        scenario.vehicle.vci50,
        scenario.weights.soil_weight,
        scenario.weights.history_weight,
        scenario.weights.enemy_weight,
        report.soil_risk,
        report.history_risk,
        report.enemy_risk,
        report.mu_total,
        report.risk_total,
        report.objective,
        report.step_count,
        report.length_km,
    )
    out = []
    for v in values:
        out.append(repr(v) if isinstance(v, float) else str(v))
    return ",".join(out)


def export_report(results: Iterable[SuiteResult]) -> str:
    """Consolidated report CSV: one row per phase per solved scenario.

    Failed scenarios contribute no rows; the caller reports their
    errors through its own channel.
    """
    lines = [",".join(REPORT_COLUMNS)]
    for result in results:
        if not result.ok:
            continue
        lines.append(_report_row(result.scenario.name, result.scenario, result.phase1))
        lines.append(_report_row(result.scenario.name, result.scenario, result.phase2))
    return "\n".join(lines) + "\n"
