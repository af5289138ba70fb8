import math

import numpy as np
import pytest

import terrapath as tp
from terrapath.errors import InfeasibleRouteError

from helpers import (
    enumerate_min_cost,
    make_cost_field,
    make_grid,
    random_problem,
    resum_route,
)


def _graph(total, start, end, nodata=None):
    total = np.asarray(total, dtype=np.float64)
    grid = make_grid(*total.shape, nodata=nodata,
                     rci=np.where(nodata, 0, 100.0) if nodata is not None else None)
    return tp.build_graph(make_cost_field(total), grid,
                          tp.CellIndex(*start), tp.CellIndex(*end))


def test_uniform_3x3_diagonal():
    g = _graph(np.full((3, 3), 0.1), (0, 0), (2, 2))
    route = tp.solve_min_cost_path(g)
    assert route.objective == 0.2
    assert route.cells == ((0, 0), (1, 1), (2, 2))
    assert route.step_count == 2
    assert tp.verify_flow_constraints(g, route).all_passed


def test_forced_row_path():
    g = _graph(np.array([[0.7, 5.0, 0.1]]), (0, 0), (0, 2))
    route = tp.solve_min_cost_path(g)
    assert route.objective == 5.0 + 0.1
    assert route.cells == ((0, 0), (0, 1), (0, 2))


def test_start_equals_end():
    g = _graph(np.full((4, 4), 1.0), (2, 2), (2, 2))
    route = tp.solve_min_cost_path(g)
    assert route.cells == ((2, 2),)
    assert route.objective == 0.0
    assert tp.verify_flow_constraints(g, route).all_passed


def test_oracle_on_pinned_cases():
    assert tp.oracle_cost(_graph(np.full((3, 3), 0.1), (0, 0), (2, 2))) == 0.2
    assert tp.oracle_cost(_graph(np.array([[0.7, 5.0, 0.1]]), (0, 0), (0, 2))) == 5.0 + 0.1


def test_uniform_cost_is_mu_times_chebyshev():
    # Dyadic cell cost: the repeated addition is exact, so the closed
    # form holds with no tolerance at all.
    mu = 0.125
    g = _graph(np.full((9, 14), mu), (1, 2), (7, 12))
    route = tp.solve_min_cost_path(g)
    chebyshev = max(abs(7 - 1), abs(12 - 2))
    assert route.objective == mu * chebyshev
    assert tp.oracle_cost(g) == mu * chebyshev
    assert route.step_count == chebyshev


def test_uniform_default_mu_close_to_chebyshev_product():
    g = _graph(np.full((9, 14), 0.1), (1, 2), (7, 12))
    route = tp.solve_min_cost_path(g)
    assert abs(route.objective - 0.1 * 10) < 1e-9


def test_infeasible_names_terminal():
    mask = np.zeros((5, 5), dtype=bool)
    mask[:, 2] = True  # wall splits the grid
    with pytest.raises(InfeasibleRouteError, match=r"\(4, 4\).*unreachable"):
        tp.solve_min_cost_path(_graph(np.full((5, 5), 1.0), (0, 0), (4, 4), nodata=mask))
    with pytest.raises(InfeasibleRouteError):
        tp.oracle_cost(_graph(np.full((5, 5), 1.0), (0, 0), (4, 4), nodata=mask))


def test_solver_equals_oracle_exactly_on_random_instances():
    rng = np.random.default_rng(400)
    solved = 0
    for _ in range(40):
        grid, field, start, end = random_problem(rng, max_dim=15)
        g = tp.build_graph(field, grid, tp.CellIndex(*start), tp.CellIndex(*end))
        try:
            route = tp.solve_min_cost_path(g)
        except InfeasibleRouteError:
            with pytest.raises(InfeasibleRouteError):
                tp.oracle_cost(g)
            continue
        assert route.objective == tp.oracle_cost(g)
        solved += 1
    assert solved >= 20


def test_solver_matches_exhaustive_enumeration():
    rng = np.random.default_rng(401)
    for _ in range(10):
        grid, field, start, end = random_problem(rng, max_dim=5, allow_nodata=False)
        g = tp.build_graph(field, grid, tp.CellIndex(*start), tp.CellIndex(*end))
        route = tp.solve_min_cost_path(g)
        best = enumerate_min_cost(field.total, ~grid.nodata_mask, start, end)
        assert math.isfinite(best)
        assert abs(route.objective - best) <= 1e-9 * max(1.0, abs(best))


def test_route_invariants_on_random_instances():
    rng = np.random.default_rng(402)
    for _ in range(20):
        grid, field, start, end = random_problem(rng, max_dim=12)
        g = tp.build_graph(field, grid, tp.CellIndex(*start), tp.CellIndex(*end))
        try:
            route = tp.solve_min_cost_path(g)
        except InfeasibleRouteError:
            continue
        assert route.cells[0] == start and route.cells[-1] == end
        assert len(set(route.cells)) == len(route.cells)
        for a, b in zip(route.cells, route.cells[1:]):
            assert (b.row - a.row, b.col - a.col) in tp.NEIGHBOR_OFFSETS
        # exact right-fold recomputation, then the looser documented bound
        assert resum_route(field.total, route.cells) == route.objective
        recomputed = float(np.sum(field.total[[c.row for c in route.cells[1:]],
                                              [c.col for c in route.cells[1:]]]))
        assert abs(recomputed - route.objective) <= 1e-9 * max(1.0, abs(recomputed))
        assert tp.verify_flow_constraints(g, route).all_passed


def test_solver_deterministic():
    rng = np.random.default_rng(403)
    grid, field, start, end = random_problem(rng, max_dim=12, allow_nodata=False)
    g = tp.build_graph(field, grid, tp.CellIndex(*start), tp.CellIndex(*end))
    assert tp.solve_min_cost_path(g) == tp.solve_min_cost_path(g)


def test_scaling_argmin_invariance():
    rng = np.random.default_rng(404)
    grid, field, start, end = random_problem(rng, max_dim=12, allow_nodata=False)
    base_graph = tp.build_graph(field, grid, tp.CellIndex(*start), tp.CellIndex(*end))
    base = tp.solve_min_cost_path(base_graph)
    for lam in (0.5, 2.0):
        scaled = tp.build_graph(make_cost_field(field.total * lam), grid,
                                tp.CellIndex(*start), tp.CellIndex(*end))
        route = tp.solve_min_cost_path(scaled)
        assert route.cells == base.cells
        assert route.objective == lam * base.objective


def test_monotone_under_pointwise_increase():
    rng = np.random.default_rng(405)
    for _ in range(10):
        grid, field, start, end = random_problem(rng, max_dim=10, allow_nodata=False)
        g = tp.build_graph(field, grid, tp.CellIndex(*start), tp.CellIndex(*end))
        lo = tp.solve_min_cost_path(g).objective
        bumped = field.total + rng.uniform(0, 3, field.total.shape)
        g2 = tp.build_graph(make_cost_field(bumped), grid,
                            tp.CellIndex(*start), tp.CellIndex(*end))
        assert tp.solve_min_cost_path(g2).objective >= lo


# --- verify_flow_constraints -------------------------------------------------

def test_verify_teleport_fails_arcs():
    g = _graph(np.full((4, 4), 1.0), (0, 0), (3, 3))
    report = tp.verify_flow_constraints(g, [(0, 0), (2, 2), (3, 3)])
    assert not report.all_passed
    assert not report.arcs.passed
    assert "8-neighbor" in report.arcs.detail
    assert report.source.passed and report.sink.passed


def test_verify_missing_end_fails_sink():
    g = _graph(np.full((4, 4), 1.0), (0, 0), (3, 3))
    report = tp.verify_flow_constraints(g, [(0, 0), (1, 1), (2, 2)])
    assert not report.sink.passed
    assert "(3, 3)" in report.sink.detail
    assert report.source.passed


def test_verify_wrong_start_fails_source():
    g = _graph(np.full((4, 4), 1.0), (0, 0), (3, 3))
    report = tp.verify_flow_constraints(g, [(1, 0), (2, 1), (3, 2), (3, 3)])
    assert not report.source.passed
    assert report.sink.passed


def test_verify_route_through_nodata_fails():
    mask = np.zeros((3, 3), dtype=bool)
    mask[1, 1] = True
    g = _graph(np.full((3, 3), 1.0), (0, 0), (2, 2), nodata=mask)
    report = tp.verify_flow_constraints(g, [(0, 0), (1, 1), (2, 2)])
    assert not report.arcs.passed
    assert "nodata" in report.arcs.detail


def test_verify_duplicate_arc_fails():
    g = _graph(np.full((3, 3), 1.0), (0, 0), (0, 2))
    cells = [(0, 0), (0, 1), (0, 0), (0, 1), (0, 2)]
    report = tp.verify_flow_constraints(g, cells)
    assert not report.arcs.passed
    assert "more than once" in report.arcs.detail


def test_verify_empty_route():
    g = _graph(np.full((3, 3), 1.0), (0, 0), (2, 2))
    report = tp.verify_flow_constraints(g, [])
    assert not report.all_passed


def test_failures_listing():
    g = _graph(np.full((4, 4), 1.0), (0, 0), (3, 3))
    report = tp.verify_flow_constraints(g, [(0, 0), (2, 2), (3, 3)])
    assert any(line.startswith("arcs:") for line in report.failures())
