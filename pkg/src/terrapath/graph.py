"""Route network over a terrain grid.

Every passable cell is a node; directed arcs connect 8-adjacent
passable cells.  An arc entering a cell costs that cell's composite
risk, so a route pays once per cell it enters and nothing for the cell
it starts on.  Two virtual terminals complete the unit-flow picture: a
source with a single zero-cost arc to the start cell and a sink fed by
a single zero-cost arc from the end cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .risk import CostField
from .terrain import CellIndex, TerrainGrid

# Clockwise from north.  The solver's tie-break walk tries neighbors in
# this order, so it is part of the package's determinism contract.
NEIGHBOR_OFFSETS: tuple[tuple[int, int], ...] = (
    (-1, 0),   # N
    (-1, 1),   # NE
    (0, 1),    # E
    (1, 1),    # SE
    (1, 0),    # S
    (1, -1),   # SW
    (0, -1),   # W
    (-1, -1),  # NW
)


def neighbors(grid: TerrainGrid, cell: CellIndex) -> list[CellIndex]:
    """Passable 8-neighbors of a cell, in NEIGHBOR_OFFSETS order."""
    cell = CellIndex(int(cell[0]), int(cell[1]))
    if not grid.in_bounds(cell):
        raise ValidationError(
            f"cell {tuple(cell)} outside {grid.n_rows}x{grid.n_cols} grid"
        )
    out = []
    for dr, dc in NEIGHBOR_OFFSETS:
        nb = CellIndex(cell.row + dr, cell.col + dc)
        if grid.is_passable(nb):
            out.append(nb)
    return out


@dataclass(frozen=True, eq=False)
class GridGraph:
    """Arc-list form of the route network.

    Nodes 0..n_cells-1 are grid cells in row-major order; node n_cells
    is the source and n_cells+1 the sink.  The arc arrays include the
    two terminal arcs (last two entries).  cell_cost is the flattened
    composite cost used both for arc weights and for per-cell sums.
    """

    n_rows: int
    n_cols: int
    start_cell: CellIndex
    end_cell: CellIndex
    arc_from: np.ndarray
    arc_to: np.ndarray
    arc_cost: np.ndarray
    cell_cost: np.ndarray
    passable: np.ndarray

    def __post_init__(self):
        for name in ("arc_from", "arc_to", "arc_cost", "cell_cost", "passable"):
            getattr(self, name).setflags(write=False)

    @property
    def n_cells(self) -> int:
        return self.n_rows * self.n_cols

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 2

    @property
    def source_id(self) -> int:
        return self.n_cells

    @property
    def sink_id(self) -> int:
        return self.n_cells + 1

    @property
    def n_arcs(self) -> int:
        return int(self.arc_from.size)

    def node_id(self, cell: CellIndex) -> int:
        return cell[0] * self.n_cols + cell[1]

    def cell_of(self, node_id: int) -> CellIndex:
        return CellIndex(node_id // self.n_cols, node_id % self.n_cols)

    def iter_arcs(self):
        """Yield (from_node, to_node, cost) triples."""
        for u, v, c in zip(self.arc_from, self.arc_to, self.arc_cost):
            yield int(u), int(v), float(c)


def build_graph(cost_field: CostField, grid: TerrainGrid,
                start: CellIndex, end: CellIndex) -> GridGraph:
    """Assemble the arc list for one planning problem.

    Arcs touching nodata cells are omitted.  Raises ValidationError if
    either endpoint is off-grid or on nodata ground.
    """
    start = CellIndex(int(start[0]), int(start[1]))
    end = CellIndex(int(end[0]), int(end[1]))
    for label, cell in (("start", start), ("end", end)):
        if not grid.in_bounds(cell):
            raise ValidationError(
                f"{label} cell {tuple(cell)} outside {grid.n_rows}x{grid.n_cols} grid"
            )
        if not grid.is_passable(cell):
            raise ValidationError(f"{label} cell {tuple(cell)} lies on nodata ground")
    if cost_field.total.shape != grid.shape:
        raise ValidationError(
            f"cost field shape {cost_field.total.shape} does not match grid {grid.shape}"
        )

    n_rows, n_cols = grid.shape
    n_cells = n_rows * n_cols
    passable = ~grid.nodata_mask
    ids = np.arange(n_cells, dtype=np.int64).reshape(n_rows, n_cols)
    total = cost_field.total

    froms = []
    tos = []
    costs = []
    for dr, dc in NEIGHBOR_OFFSETS:
        src_r = slice(max(0, -dr), n_rows - max(0, dr))
        src_c = slice(max(0, -dc), n_cols - max(0, dc))
        dst_r = slice(max(0, dr), n_rows - max(0, -dr))
        dst_c = slice(max(0, dc), n_cols - max(0, -dc))
        ok = passable[src_r, src_c] & passable[dst_r, dst_c]
        froms.append(ids[src_r, src_c][ok])
        tos.append(ids[dst_r, dst_c][ok])
        costs.append(total[dst_r, dst_c][ok])

    source = n_cells
    sink = n_cells + 1
    froms.append(np.array([source, ids[end.row, end.col]], dtype=np.int64))
    tos.append(np.array([ids[start.row, start.col], sink], dtype=np.int64))
    costs.append(np.zeros(2))

    return GridGraph(
        n_rows=n_rows,
        n_cols=n_cols,
        start_cell=start,
        end_cell=end,
        arc_from=np.concatenate(froms),
        arc_to=np.concatenate(tos),
        arc_cost=np.concatenate(costs).astype(np.float64),
        cell_cost=total.reshape(-1).copy(),
        passable=passable.reshape(-1).copy(),
    )
