"""Walk the HTTP planning service through a full session in-process.

Uses the test client, so no server needs to be running: load terrain,
set a scenario, solve, commit the route as history, solve again, then
clear history and confirm the first answer comes back.
"""

from starlette.testclient import TestClient

from terrapath.service import SessionState, create_app

TERRAIN = {
    "synthetic": {
        "seed": 0, "n_rows": 100, "n_cols": 100, "cell_size": 100.0,
        "base_rci": 80.0, "valley_depth": 70.0, "valley_count": 3,
        "smoothness": 6.0,
    }
}

SCENARIO = {
    "vehicle": {"name": "tracked-engineer", "vci50": 54.0},
    "weights": {"P": 5.0, "H": 20.0, "R": 20.0,
                "k_h": 15.0, "k_r": 30.0, "mu": 0.1},
    "start": [0, 0],
    "end": [99, 99],
    "enemy": [[55, 55]],
}


def main() -> None:
    client = TestClient(create_app(SessionState()))

    summary = client.put("/terrain", json=TERRAIN).json()
    print(f"terrain: {summary['n_rows']}x{summary['n_cols']}, "
          f"rci {summary['rci_min']:.1f}..{summary['rci_max']:.1f}")

    client.put("/scenario", json=SCENARIO).raise_for_status()

    first = client.post("/solve").json()
    rep = first["report"]
    print(f"pass {rep['phase']}: route {first['route_id']} "
          f"objective {rep['objective']:.2f} ({rep['step_count']} steps)")

    committed = client.post("/history/commit",
                            json={"route_id": first["route_id"]}).json()
    print(f"committed {committed['history_cell_count']} cells as history")

    second = client.post("/solve").json()
    rep2 = second["report"]
    print(f"pass {rep2['phase']}: route {second['route_id']} "
          f"objective {rep2['objective']:.2f} ({rep2['step_count']} steps, "
          f"history risk {rep2['history_risk']:.2f})")

    cleared = client.delete("/history").json()
    print(f"cleared {cleared['cleared_routes']} committed route(s)")

    again = client.post("/solve").json()
    same = again["route_id"] == first["route_id"]
    print(f"re-solve after clear matches the first pass: {same}")


if __name__ == "__main__":
    main()
