"""HTTP facade for the interactive planning loop.

One session per process: load a terrain, set the tactical scenario,
solve, commit routes into history, solve again.  Solves never mutate
state; only terrain load, scenario update, and history commit/clear
do.  Every route leaves the server only after passing the flow
constraints and the decomposition sum check.

Status codes: 400 for validation problems (with the offending field in
the detail), 409 for committing an unknown route id, 422 for an
infeasible solve (the unreachable terminal is named in the detail).
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import threading
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import InfeasibleRouteError, ValidationError
from .graph import build_graph
from .io import _cell, _check_keys, _parse_terrain, _parse_vehicle, _parse_weights
from .risk import RiskWeights, TacticalPicture, Vehicle, build_cost_field
from .scenario import build_report
from .solver import solve_min_cost_path, verify_flow_constraints
from .terrain import (
    CellIndex,
    TerrainGrid,
    generate_synthetic_terrain,
    load_ascii_grid,
    parse_ascii_grid,
    scale_rci,
    serialize_ascii_grid,
)

PREVIEW_MAX_DIM = 64


@dataclass(frozen=True)
class TacticalScenario:
    """The mutable part of the session: who drives where, past what."""

    vehicle: Vehicle
    weights: RiskWeights
    start: CellIndex
    end: CellIndex
    enemy_cells: frozenset[CellIndex]

    def to_doc(self) -> dict:
        return {
            "vehicle": {"name": self.vehicle.name, "vci50": self.vehicle.vci50},
            "weights": {
                "P": self.weights.soil_weight,
                "H": self.weights.history_weight,
                "R": self.weights.enemy_weight,
                "k_h": self.weights.history_decay,
                "k_r": self.weights.enemy_decay,
                "mu": self.weights.floor_cost,
            },
            "start": [self.start.row, self.start.col],
            "end": [self.end.row, self.end.col],
            "enemy": [[c.row, c.col] for c in sorted(self.enemy_cells)],
        }


class SessionState:
    """Terrain, scenario, solved-route cache, and committed history.

    Mutations hold the lock; a solve snapshots what it needs under the
    lock and computes outside it.
    """

    def __init__(self):
        self.lock = threading.Lock()
        self.terrain: TerrainGrid | None = None
        self.terrain_fingerprint: str | None = None
        self.scenario: TacticalScenario | None = None
        self.solved: dict[str, dict] = {}
        self.committed: list[dict] = []

    def load_terrain(self, grid: TerrainGrid) -> None:
        fingerprint = hashlib.sha256(
            serialize_ascii_grid(grid).encode()
        ).hexdigest()[:16]
        with self.lock:
            self.terrain = grid
            self.terrain_fingerprint = fingerprint
            self.scenario = None
            self.solved = {}
            self.committed = []

    def history_cells(self) -> frozenset[CellIndex]:
        cells = set()
        for entry in self.committed:
            cells.update(CellIndex(r, c) for r, c in entry["cells"])
        return frozenset(cells)


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def _terrain_summary(grid: TerrainGrid) -> dict:
    valid = grid.rci[~grid.nodata_mask]
    row_stride = max(1, math.ceil(grid.n_rows / PREVIEW_MAX_DIM))
    col_stride = max(1, math.ceil(grid.n_cols / PREVIEW_MAX_DIM))
    preview = grid.rci[::row_stride, ::col_stride]
    preview_mask = grid.nodata_mask[::row_stride, ::col_stride]
    values = [
        [None if m else float(v) for v, m in zip(row_v, row_m)]
        for row_v, row_m in zip(preview, preview_mask)
    ]
    return {
        "n_rows": grid.n_rows,
        "n_cols": grid.n_cols,
        "cell_size": grid.cell_size,
        "origin": list(grid.origin),
        "rci_min": float(valid.min()) if valid.size else None,
        "rci_max": float(valid.max()) if valid.size else None,
        "nodata_count": int(grid.nodata_mask.sum()),
        "preview": {
            "values": values,
            "row_stride": row_stride,
            "col_stride": col_stride,
        },
    }


def _parse_scenario_body(doc: dict, grid: TerrainGrid) -> TacticalScenario:
    _check_keys(doc, ["vehicle", "weights", "start", "end"], ["enemy"], "scenario")
    vehicle = _parse_vehicle(doc["vehicle"], "scenario.vehicle")
    weights = _parse_weights(doc["weights"], "scenario.weights")
    start = _cell(doc["start"], "scenario.start")
    end = _cell(doc["end"], "scenario.end")
    enemy = doc.get("enemy", [])
    if not isinstance(enemy, list):
        raise ValidationError("scenario.enemy: expected a list of [row, col] cells")
    enemy_cells = frozenset(
        _cell(c, f"scenario.enemy[{i}]") for i, c in enumerate(enemy)
    )
    for label, cell in (("start", start), ("end", end), *(("enemy", c) for c in sorted(enemy_cells))):
        if not grid.in_bounds(cell):
            raise ValidationError(
                f"scenario.{label}: cell {tuple(cell)} outside "
                f"{grid.n_rows}x{grid.n_cols} grid"
            )
        if not grid.is_passable(cell):
            raise ValidationError(
                f"scenario.{label}: cell {tuple(cell)} lies on nodata ground"
            )
    return TacticalScenario(
        vehicle=vehicle, weights=weights, start=start, end=end, enemy_cells=enemy_cells
    )


def _route_id(state_fingerprint: str, scenario_doc: dict,
              history: frozenset[CellIndex], cells) -> str:
    payload = json.dumps(
        {
            "terrain": state_fingerprint,
            "scenario": scenario_doc,
            "history": sorted([c.row, c.col] for c in history),
            "route": [[c.row, c.col] for c in cells],
        },
        sort_keys=True,
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:12]


def create_app(state: SessionState | None = None) -> FastAPI:
    app = FastAPI(title="terrapath service", docs_url=None, redoc_url=None)
    # Browser clients are often served from a different origin than the
    # planning service; the session holds no credentials, so open CORS
    # is safe here.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.session = state if state is not None else SessionState()

    def session() -> SessionState:
        return app.state.session

    @app.put("/terrain")
    async def put_terrain(request: Request):
        body = await request.body()
        content_type = request.headers.get("content-type", "")
        try:
            if content_type.startswith("application/json"):
                try:
                    doc = json.loads(body)
                except json.JSONDecodeError as e:
                    return _error(400, f"terrain body is not valid JSON: {e}")
                if not isinstance(doc, dict):
                    return _error(400, "terrain body must be a JSON object")
                path, spec, rci_scale = _parse_terrain(doc, "terrain", base_dir=None)
                if path is not None:
                    grid = load_ascii_grid(path)
                else:
                    grid = generate_synthetic_terrain(
                        spec.seed, spec.n_rows, spec.n_cols, spec.cell_size, spec.params
                    )
                if rci_scale is not None:
                    grid = scale_rci(grid, rci_scale)
            else:
                grid = parse_ascii_grid(body.decode())
        except ValidationError as e:
            return _error(400, str(e))
        except OSError as e:
            return _error(400, str(e))
        session().load_terrain(grid)
        return _terrain_summary(grid)

    @app.get("/terrain")
    def get_terrain():
        st = session()
        with st.lock:
            grid = st.terrain
        if grid is None:
            return _error(404, "no terrain loaded")
        return _terrain_summary(grid)

    @app.get("/terrain/raster")
    def get_raster():
        st = session()
        with st.lock:
            grid = st.terrain
        if grid is None:
            return _error(404, "no terrain loaded")
        flat = np.where(grid.nodata_mask, np.nan, grid.rci).ravel()
        rci = [None if math.isnan(v) else float(v) for v in flat]
        return {
            "n_rows": grid.n_rows,
            "n_cols": grid.n_cols,
            "cell_size": grid.cell_size,
            "origin": list(grid.origin),
            "rci": rci,
        }

    @app.put("/scenario")
    async def put_scenario(request: Request):
        st = session()
        try:
            doc = await request.json()
        except json.JSONDecodeError as e:
            return _error(400, f"scenario body is not valid JSON: {e}")
        with st.lock:
            grid = st.terrain
        if grid is None:
            return _error(400, "no terrain loaded; PUT /terrain first")
        try:
            scenario = _parse_scenario_body(doc, grid)
        except ValidationError as e:
            return _error(400, str(e))
        with st.lock:
            st.scenario = scenario
        return {"scenario": scenario.to_doc()}

    @app.get("/scenario")
    def get_scenario():
        st = session()
        with st.lock:
            scenario = st.scenario
        if scenario is None:
            return _error(404, "no scenario set")
        return {"scenario": scenario.to_doc()}

    @app.post("/solve")
    def post_solve():
        st = session()
        with st.lock:
            grid = st.terrain
            fingerprint = st.terrain_fingerprint
            scenario = st.scenario
            history = st.history_cells()
        if grid is None:
            return _error(400, "no terrain loaded; PUT /terrain first")
        if scenario is None:
            return _error(400, "no scenario set; PUT /scenario first")

        picture = TacticalPicture(
            enemy_cells=scenario.enemy_cells, history_cells=history
        )
        field = build_cost_field(grid, scenario.vehicle, scenario.weights, picture)
        net = build_graph(field, grid, scenario.start, scenario.end)
        try:
            route = solve_min_cost_path(net)
        except InfeasibleRouteError as e:
            return _error(422, str(e))

        check = verify_flow_constraints(net, route)
        phase = 1 if not history else 2
        report = build_report(phase, route, field, grid.cell_size)
        parts_sum = (
            report.soil_risk + report.history_risk
            + report.enemy_risk + report.mu_total
        )
        if not check.all_passed or abs(parts_sum - report.objective) > 1e-6 * max(
            1.0, abs(report.objective)
        ):
            return _error(500, "internal consistency check failed: " + "; ".join(check.failures()))

        route_id = _route_id(fingerprint, scenario.to_doc(), history, route.cells)
        response = {
            "route_id": route_id,
            "cells": [[c.row, c.col] for c in route.cells],
            "coordinates": [list(grid.cell_center(c)) for c in route.cells],
            "report": {
                "phase": report.phase,
                "soil_risk": report.soil_risk,
                "history_risk": report.history_risk,
                "enemy_risk": report.enemy_risk,
                "mu_total": report.mu_total,
                "risk_total": report.risk_total,
                "objective": report.objective,
                "step_count": report.step_count,
                "length_km": report.length_km,
            },
            "history_cell_count": len(history),
        }
        with st.lock:
            st.solved[route_id] = {
                "cells": [[c.row, c.col] for c in route.cells],
                "report": response["report"],
            }
        return response

    @app.post("/history/commit")
    async def post_commit(request: Request):
        st = session()
        try:
            doc = await request.json()
        except json.JSONDecodeError as e:
            return _error(400, f"commit body is not valid JSON: {e}")
        if not isinstance(doc, dict) or set(doc) != {"route_id"}:
            return _error(400, "commit body must be {\"route_id\": \"...\"}")
        route_id = doc["route_id"]
        with st.lock:
            entry = st.solved.get(route_id)
            if entry is None:
                return _error(409, f"unknown route_id {route_id!r}; solve it first")
            already = any(e["route_id"] == route_id for e in st.committed)
            if not already:
                st.committed.append(
                    {
                        "route_id": route_id,
                        "cells": entry["cells"],
                        "report": entry["report"],
                    }
                )
            history_len = len(st.history_cells())
        return {
            "route_id": route_id,
            "already_committed": already,
            "history_cell_count": history_len,
        }

    @app.get("/history")
    def get_history():
        st = session()
        with st.lock:
            routes = [dict(e) for e in st.committed]
            cells = sorted([c.row, c.col] for c in st.history_cells())
        return {"routes": routes, "cells": cells}

    @app.delete("/history")
    def delete_history():
        st = session()
        with st.lock:
            cleared = len(st.committed)
            st.committed = []
        return {"cleared_routes": cleared}

    return app


def main(argv=None) -> int:
    import argparse

    import uvicorn

    parser = argparse.ArgumentParser(
        prog="terrapath-serve", description="Serve the route-planning HTTP API."
    )
    parser.add_argument("--host", default=os.environ.get("TERRAPATH_HOST", "127.0.0.1"))
    parser.add_argument(
        "--port", type=int, default=int(os.environ.get("TERRAPATH_PORT", "8000"))
    )
    parser.add_argument(
        "--terrain",
        default=os.environ.get("TERRAPATH_TERRAIN"),
        help="ASCII grid to preload",
    )
    args = parser.parse_args(argv)

    state = SessionState()
    if args.terrain:
        state.load_terrain(load_ascii_grid(args.terrain))
    app = create_app(state)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    import sys

    sys.exit(main())
