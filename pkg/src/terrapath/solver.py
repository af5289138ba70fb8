"""Minimum-risk route solving and flow-constraint verification.

The unit-flow problem on a GridGraph has nonnegative arc costs, so the
optimal flow is an optimal path and a label-setting shortest-path
search finds it.  We run the search backward from the end cell; the
resulting cost-to-go labels also drive a deterministic forward walk
that reconstructs one optimal route, breaking ties by compass order.

oracle_cost recomputes the optimum by value iteration over the raw arc
list.  It shares no search logic with the primary solver, which makes
it a useful cross-check: both must agree exactly, because each computes
the same suffix sums over the same optimal path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _dijkstra

from .errors import InfeasibleRouteError
from .graph import NEIGHBOR_OFFSETS, GridGraph
from .terrain import CellIndex


@dataclass(frozen=True)
class Route:
    """An ordered walk of grid cells from start to end.

    objective is the total risk paid: the sum of cell costs over every
    cell after the first.
    """

    cells: tuple[CellIndex, ...]
    objective: float

    @property
    def step_count(self) -> int:
        return len(self.cells) - 1

    def length_m(self, cell_size: float) -> float:
        """Center-to-center route length in meters."""
        total = 0.0
        for a, b in zip(self.cells, self.cells[1:]):
            total += math.hypot(b.row - a.row, b.col - a.col) * cell_size
        return total


def cost_to_go(graph: GridGraph) -> np.ndarray:
    """Minimum remaining cost from every node to the sink.

    Computed by one shortest-path sweep over the arc-reversed graph,
    rooted at the end cell (the sink arc is free, so labels against the
    end cell and against the sink coincide).
    """
    n = graph.n_nodes
    reversed_adj = csr_matrix(
        (graph.arc_cost, (graph.arc_to, graph.arc_from)), shape=(n, n)
    )
    end_id = graph.node_id(graph.end_cell)
    labels = _dijkstra(reversed_adj, directed=True, indices=end_id)
    return np.asarray(labels)


def solve_min_cost_path(graph: GridGraph) -> Route:
    """Find one minimum-cost route from start to end.

    Ties are broken deterministically: from each cell the walk takes
    the first neighbor, in NEIGHBOR_OFFSETS order, whose cell cost plus
    cost-to-go exactly equals the current label.  Such a neighbor
    always exists on an optimal route because the labels were built
    from the same sums.

    Raises InfeasibleRouteError when the end cell cannot be reached.
    """
    labels = cost_to_go(graph)
    start_id = graph.node_id(graph.start_cell)
    if not np.isfinite(labels[start_id]):
        raise InfeasibleRouteError(
            f"end cell {tuple(graph.end_cell)} is unreachable from "
            f"start cell {tuple(graph.start_cell)}",
            detail=f"unreachable end cell {tuple(graph.end_cell)}",
        )

    cells = [graph.start_cell]
    cur = graph.start_cell
    seen = {cur}
    while cur != graph.end_cell:
        cur_id = graph.node_id(cur)
        nxt = None
        for dr, dc in NEIGHBOR_OFFSETS:
            nb = CellIndex(cur.row + dr, cur.col + dc)
            if not (0 <= nb.row < graph.n_rows and 0 <= nb.col < graph.n_cols):
                continue
            nb_id = graph.node_id(nb)
            if not graph.passable[nb_id]:
                continue
            if graph.cell_cost[nb_id] + labels[nb_id] == labels[cur_id]:
                nxt = nb
                break
        if nxt is None or nxt in seen:
            # Cannot happen with labels produced by cost_to_go; guards
            # against a corrupted graph handed in by a caller.
            raise InfeasibleRouteError(
                f"tie-break walk stalled at cell {tuple(cur)}",
                detail="inconsistent cost-to-go labels",
            )
        cells.append(nxt)
        seen.add(nxt)
        cur = nxt

    return Route(cells=tuple(cells), objective=float(labels[start_id]))


@dataclass(frozen=True)
class ConstraintCheck:
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class FlowCheckReport:
    """Outcome of checking a route against the unit-flow constraints."""

    source: ConstraintCheck
    sink: ConstraintCheck
    balance: ConstraintCheck
    arcs: ConstraintCheck

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in (self.source, self.sink, self.balance, self.arcs))

    def failures(self) -> list[str]:
        out = []
        for name in ("source", "sink", "balance", "arcs"):
            check = getattr(self, name)
            if not check.passed:
                out.append(f"{name}: {check.detail}")
        return out


def verify_flow_constraints(graph: GridGraph,
                            route: Route | Sequence[CellIndex]) -> FlowCheckReport:
    """Check that a route is a feasible unit flow on the graph.

    The route's arc-usage indicators must send exactly one unit out of
    the source, one unit into the sink, balance flow at every cell, and
    use only arcs that exist in the graph, each at most once.  Routes
    produced elsewhere can be checked too; problems are reported, not
    raised.
    """
    cells = list(route.cells if isinstance(route, Route) else route)
    if not cells:
        missing = ConstraintCheck(False, "route is empty")
        return FlowCheckReport(source=missing, sink=missing, balance=missing, arcs=missing)

    cells = [CellIndex(int(r), int(c)) for r, c in cells]

    if cells[0] == graph.start_cell:
        source = ConstraintCheck(True)
    else:
        source = ConstraintCheck(
            False,
            f"route begins at {tuple(cells[0])}, but the only source arc "
            f"feeds {tuple(graph.start_cell)}",
        )
    if cells[-1] == graph.end_cell:
        sink = ConstraintCheck(True)
    else:
        sink = ConstraintCheck(
            False,
            f"route ends at {tuple(cells[-1])}, but the only sink arc "
            f"drains {tuple(graph.end_cell)}",
        )

    offsets = set(NEIGHBOR_OFFSETS)
    arcs = ConstraintCheck(True)
    used = set()
    for a, b in zip(cells, cells[1:]):
        problem = None
        if not (0 <= b.row < graph.n_rows and 0 <= b.col < graph.n_cols):
            problem = f"cell {tuple(b)} is off-grid"
        elif not (0 <= a.row < graph.n_rows and 0 <= a.col < graph.n_cols):
            problem = f"cell {tuple(a)} is off-grid"
        elif (b.row - a.row, b.col - a.col) not in offsets:
            problem = f"{tuple(a)} -> {tuple(b)} is not an 8-neighbor step"
        elif not (graph.passable[graph.node_id(a)] and graph.passable[graph.node_id(b)]):
            problem = f"{tuple(a)} -> {tuple(b)} touches nodata ground"
        elif (a, b) in used:
            problem = f"arc {tuple(a)} -> {tuple(b)} used more than once"
        if problem is not None:
            arcs = ConstraintCheck(False, problem)
            break
        used.add((a, b))

    # Flow balance at grid nodes: count arc uses including the implied
    # terminal arcs, then require inflow == outflow everywhere.
    inflow: dict[CellIndex, int] = {}
    outflow: dict[CellIndex, int] = {}
    outflow[cells[0]] = outflow.get(cells[0], 0)
    inflow[cells[0]] = inflow.get(cells[0], 0) + 1  # from source
    for a, b in zip(cells, cells[1:]):
        outflow[a] = outflow.get(a, 0) + 1
        inflow[b] = inflow.get(b, 0) + 1
    outflow[cells[-1]] = outflow.get(cells[-1], 0) + 1  # into sink

    balance = ConstraintCheck(True)
    for cell in inflow:
        if inflow.get(cell, 0) != outflow.get(cell, 0):
            balance = ConstraintCheck(
                False,
                f"cell {tuple(cell)} receives {inflow.get(cell, 0)} units "
                f"but sends {outflow.get(cell, 0)}",
            )
            break

    return FlowCheckReport(source=source, sink=sink, balance=balance, arcs=arcs)


def oracle_cost(graph: GridGraph) -> float:
    """Optimal objective recomputed by value iteration on the arc list.

    Starts from cost 0 at the sink and repeatedly applies
    label[u] = min(label[u], cost(u, v) + label[v]) across all arcs
    until nothing changes.  Independent of the label-setting solver;
    used to cross-check it.

    Raises InfeasibleRouteError when the source label stays infinite.
    """
    labels = np.full(graph.n_nodes, np.inf)
    labels[graph.sink_id] = 0.0
    while True:
        candidate = graph.arc_cost + labels[graph.arc_to]
        updated = labels.copy()
        np.minimum.at(updated, graph.arc_from, candidate)
        if np.array_equal(updated, labels):
            break
        labels = updated
    value = labels[graph.source_id]
    if not np.isfinite(value):
        raise InfeasibleRouteError(
            f"end cell {tuple(graph.end_cell)} is unreachable from "
            f"start cell {tuple(graph.start_cell)}",
            detail=f"unreachable end cell {tuple(graph.end_cell)}",
        )
    return float(value)
