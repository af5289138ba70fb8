import numpy as np
import pytest
from fastapi.testclient import TestClient

import terrapath as tp
from terrapath.service import SessionState, create_app

from helpers import GOLDEN_TERRAIN_PARAMS, make_grid


GOLDEN_TERRAIN_BODY = {
    "synthetic": {
        "seed": 0, "n_rows": 100, "n_cols": 100, "cell_size": 100.0,
        "base_rci": GOLDEN_TERRAIN_PARAMS.base_rci,
        "valley_depth": GOLDEN_TERRAIN_PARAMS.valley_depth,
        "valley_count": GOLDEN_TERRAIN_PARAMS.valley_count,
        "smoothness": GOLDEN_TERRAIN_PARAMS.smoothness,
    }
}

GOLDEN_SCENARIO_BODY = {
    "vehicle": {"name": "convoy-limiter", "vci50": 54},
    "weights": {"P": 5, "H": 20, "R": 20, "k_h": 15, "k_r": 30},
    "start": [0, 0],
    "end": [99, 99],
    "enemy": [[55, 55]],
}

SMALL_TERRAIN_BODY = {
    "synthetic": {
        "seed": 3, "n_rows": 20, "n_cols": 20, "cell_size": 100.0,
        "base_rci": 80, "valley_depth": 40, "valley_count": 1, "smoothness": 6,
    }
}

SMALL_SCENARIO_BODY = {
    "vehicle": {"name": "apc", "vci50": 54},
    "weights": {"P": 5, "H": 20, "R": 20, "k_h": 15, "k_r": 30},
    "start": [0, 0],
    "end": [19, 19],
    "enemy": [[10, 10]],
}


@pytest.fixture()
def client():
    with TestClient(create_app(SessionState())) as c:
        yield c


def assert_decomposition_sums(report):
    total = (report["soil_risk"] + report["history_risk"]
             + report["enemy_risk"] + report["mu_total"])
    assert abs(total - report["objective"]) <= 1e-6 * max(1.0, abs(report["objective"]))


# --- terrain -----------------------------------------------------------------

def test_put_terrain_synthetic_summary(client):
    resp = client.put("/terrain", json=SMALL_TERRAIN_BODY)
    assert resp.status_code == 200
    body = resp.json()
    assert body["n_rows"] == 20 and body["n_cols"] == 20
    assert body["rci_min"] < 54 < body["rci_max"]
    assert body["nodata_count"] == 0
    assert len(body["preview"]["values"]) == 20
    assert client.get("/terrain").json() == body


def test_put_terrain_raw_ascii(client):
    mask = np.zeros((4, 5), dtype=bool)
    mask[1, 2] = True
    grid = make_grid(4, 5, nodata=mask, rci=np.where(mask, 0, 80.0))
    resp = client.put("/terrain", content=tp.serialize_ascii_grid(grid),
                      headers={"content-type": "text/plain"})
    assert resp.status_code == 200
    body = resp.json()
    assert (body["n_rows"], body["n_cols"]) == (4, 5)
    assert body["nodata_count"] == 1
    raster = client.get("/terrain/raster").json()
    assert len(raster["rci"]) == 20
    assert raster["rci"][1 * 5 + 2] is None
    assert raster["rci"][0] == 80.0


def test_terrain_preview_is_downsampled(client):
    client.put("/terrain", json=GOLDEN_TERRAIN_BODY)
    body = client.get("/terrain").json()
    preview = body["preview"]
    assert preview["row_stride"] == 2 and preview["col_stride"] == 2
    assert len(preview["values"]) == 50
    assert len(preview["values"][0]) == 50
    grid = tp.generate_synthetic_terrain(0, 100, 100, 100.0, GOLDEN_TERRAIN_PARAMS)
    assert preview["values"][3][7] == grid.rci[6, 14]


def test_put_terrain_rejects_bad_bodies(client):
    assert client.put("/terrain", content="not a grid",
                      headers={"content-type": "text/plain"}).status_code == 400
    assert client.put("/terrain", content="{broken",
                      headers={"content-type": "application/json"}).status_code == 400
    both = {"path": "x.asc", "synthetic": SMALL_TERRAIN_BODY["synthetic"]}
    resp = client.put("/terrain", json=both)
    assert resp.status_code == 400
    assert "exactly one" in resp.json()["detail"]


def test_terrain_endpoints_before_load(client):
    assert client.get("/terrain").status_code == 404
    assert client.get("/terrain/raster").status_code == 404


# --- scenario ----------------------------------------------------------------

def test_put_scenario_echo(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    resp = client.put("/scenario", json=SMALL_SCENARIO_BODY)
    assert resp.status_code == 200
    echo = resp.json()["scenario"]
    assert echo["weights"]["mu"] == 0.1
    assert echo["start"] == [0, 0]
    assert echo["enemy"] == [[10, 10]]
    assert client.get("/scenario").json()["scenario"] == echo


def test_scenario_requires_terrain(client):
    resp = client.put("/scenario", json=SMALL_SCENARIO_BODY)
    assert resp.status_code == 400
    assert "terrain" in resp.json()["detail"]


def test_scenario_zero_decay_names_field(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    body = dict(SMALL_SCENARIO_BODY)
    body["weights"] = dict(SMALL_SCENARIO_BODY["weights"], k_r=0)
    resp = client.put("/scenario", json=body)
    assert resp.status_code == 400
    assert "k_r" in resp.json()["detail"]


def test_scenario_cell_validation(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    body = dict(SMALL_SCENARIO_BODY, start=[0, 99])
    resp = client.put("/scenario", json=body)
    assert resp.status_code == 400
    assert "start" in resp.json()["detail"]
    assert client.get("/scenario").status_code == 404  # bad update not applied

    mask = np.zeros((4, 4), dtype=bool)
    mask[2, 2] = True
    grid = make_grid(4, 4, nodata=mask, rci=np.where(mask, 0, 80.0))
    client.put("/terrain", content=tp.serialize_ascii_grid(grid),
               headers={"content-type": "text/plain"})
    body = dict(SMALL_SCENARIO_BODY, start=[0, 0], end=[3, 3], enemy=[[2, 2]])
    resp = client.put("/scenario", json=body)
    assert resp.status_code == 400
    assert "enemy" in resp.json()["detail"]


# --- solve -------------------------------------------------------------------

def test_solve_requires_state(client):
    resp = client.post("/solve")
    assert resp.status_code == 400
    assert "terrain" in resp.json()["detail"]
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    resp = client.post("/solve")
    assert resp.status_code == 400
    assert "scenario" in resp.json()["detail"]


def test_solve_decomposition_and_geometry(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    client.put("/scenario", json=SMALL_SCENARIO_BODY)
    resp = client.post("/solve")
    assert resp.status_code == 200
    body = resp.json()
    assert body["report"]["phase"] == 1
    assert body["history_cell_count"] == 0
    assert body["cells"][0] == [0, 0] and body["cells"][-1] == [19, 19]
    assert len(body["coordinates"]) == len(body["cells"])
    assert body["report"]["step_count"] == len(body["cells"]) - 1
    assert body["report"]["length_km"] == body["report"]["step_count"] * 100.0 / 1000.0
    assert_decomposition_sums(body["report"])


def test_solve_does_not_mutate_state(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    client.put("/scenario", json=SMALL_SCENARIO_BODY)
    first = client.post("/solve").json()
    second = client.post("/solve").json()
    assert first == second
    assert client.get("/history").json() == {"routes": [], "cells": []}


def test_solve_infeasible_names_terminal(client):
    mask = np.zeros((6, 6), dtype=bool)
    mask[:, 3] = True
    grid = make_grid(6, 6, nodata=mask, rci=np.where(mask, 0, 80.0))
    client.put("/terrain", content=tp.serialize_ascii_grid(grid),
               headers={"content-type": "text/plain"})
    body = dict(SMALL_SCENARIO_BODY, start=[0, 0], end=[5, 5], enemy=[])
    assert client.put("/scenario", json=body).status_code == 200
    resp = client.post("/solve")
    assert resp.status_code == 422
    assert "unreachable" in resp.json()["detail"]
    assert "(5, 5)" in resp.json()["detail"]


# --- history and the planning loop -------------------------------------------

def test_commit_unknown_route(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    resp = client.post("/history/commit", json={"route_id": "feedbeef0123"})
    assert resp.status_code == 409


def test_commit_body_validation(client):
    resp = client.post("/history/commit", json={"other": 1})
    assert resp.status_code == 400


def test_commit_is_idempotent(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    client.put("/scenario", json=SMALL_SCENARIO_BODY)
    solved = client.post("/solve").json()
    first = client.post("/history/commit", json={"route_id": solved["route_id"]})
    again = client.post("/history/commit", json={"route_id": solved["route_id"]})
    assert first.json()["already_committed"] is False
    assert again.json()["already_committed"] is True
    assert first.json()["history_cell_count"] == again.json()["history_cell_count"]
    history = client.get("/history").json()
    assert len(history["routes"]) == 1
    assert history["routes"][0]["route_id"] == solved["route_id"]


def test_full_planning_loop_on_golden_terrain(client):
    client.put("/terrain", json=GOLDEN_TERRAIN_BODY)
    client.put("/scenario", json=GOLDEN_SCENARIO_BODY)

    first = client.post("/solve").json()
    assert first["report"]["phase"] == 1
    assert first["report"]["history_risk"] == 0.0
    assert_decomposition_sums(first["report"])

    commit = client.post("/history/commit", json={"route_id": first["route_id"]})
    assert commit.status_code == 200
    assert commit.json()["history_cell_count"] == len(first["cells"])

    second = client.post("/solve").json()
    assert second["report"]["phase"] == 2
    assert second["history_cell_count"] == len(first["cells"])
    assert second["route_id"] != first["route_id"]
    assert_decomposition_sums(second["report"])
    # With H > 0 the re-plan leaves the committed path somewhere in the
    # interior, not merely at the shared endpoints.
    interior_first = set(map(tuple, first["cells"][1:-1]))
    interior_second = set(map(tuple, second["cells"][1:-1]))
    assert interior_second - interior_first
    assert second["report"]["objective"] >= first["report"]["objective"]

    cleared = client.delete("/history").json()
    assert cleared == {"cleared_routes": 1}
    assert client.get("/history").json() == {"routes": [], "cells": []}
    third = client.post("/solve").json()
    assert third == first


def test_history_off_reuses_committed_route(client):
    client.put("/terrain", json=GOLDEN_TERRAIN_BODY)
    body = dict(GOLDEN_SCENARIO_BODY)
    body["weights"] = dict(GOLDEN_SCENARIO_BODY["weights"], H=0)
    client.put("/scenario", json=body)
    first = client.post("/solve").json()
    client.post("/history/commit", json={"route_id": first["route_id"]})
    second = client.post("/solve").json()
    assert second["cells"] == first["cells"]
    assert second["report"]["phase"] == 2
    assert second["route_id"] != first["route_id"]  # state differs even if cells match


def test_terrain_reload_resets_session(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    client.put("/scenario", json=SMALL_SCENARIO_BODY)
    solved = client.post("/solve").json()
    client.post("/history/commit", json={"route_id": solved["route_id"]})
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    assert client.get("/scenario").status_code == 404
    assert client.get("/history").json() == {"routes": [], "cells": []}
    assert client.post("/solve").status_code == 400


def test_scenario_update_keeps_history(client):
    client.put("/terrain", json=SMALL_TERRAIN_BODY)
    client.put("/scenario", json=SMALL_SCENARIO_BODY)
    solved = client.post("/solve").json()
    client.post("/history/commit", json={"route_id": solved["route_id"]})
    moved = dict(SMALL_SCENARIO_BODY, enemy=[[5, 14]])
    client.put("/scenario", json=moved)
    assert len(client.get("/history").json()["routes"]) == 1
    resp = client.post("/solve").json()
    assert resp["report"]["phase"] == 2


def test_cross_origin_requests_are_allowed(client):
    resp = client.put(
        "/terrain",
        json=SMALL_TERRAIN_BODY,
        headers={"Origin": "http://localhost:5173"},
    )
    assert resp.status_code == 200
    assert resp.headers["access-control-allow-origin"] == "*"
    preflight = client.options(
        "/solve",
        headers={
            "Origin": "http://localhost:5173",
            "Access-Control-Request-Method": "POST",
        },
    )
    assert preflight.status_code == 200
    assert "POST" in preflight.headers["access-control-allow-methods"]
