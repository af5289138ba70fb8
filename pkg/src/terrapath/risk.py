"""Per-cell risk costs.

Each passable cell is charged a composite cost:

    total = soil + history + enemy + floor

where soil penalizes weak ground relative to the vehicle's 50-pass
cone-index requirement, history and enemy decay exponentially with
straight-line distance to the nearest previously used cell or known
enemy position, and floor is a small constant that keeps every cell
cost strictly positive (so shorter routes win among otherwise equal
ones).  Distances are measured in cells, center to center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.ndimage import distance_transform_edt

from .errors import ValidationError
from .terrain import CellIndex, TerrainGrid


@dataclass(frozen=True)
class Vehicle:
    """A vehicle's soil-strength demand.

    vci50 is the minimum rating cone index (psi) the vehicle needs to
    cross ground fifty times without becoming stuck.
    """

    name: str
    vci50: float

    def __post_init__(self):
        if not (math.isfinite(self.vci50) and self.vci50 > 0):
            raise ValidationError(f"vci50 must be positive, got {self.vci50}")


@dataclass(frozen=True)
class RiskWeights:
    """Coefficients of the composite cell cost.

    soil_weight scales the psi shortfall below vci50.  history_weight
    and enemy_weight are the at-source magnitudes of the two proximity
    penalties; history_decay and enemy_decay are their e-folding
    distances in cells.  floor_cost is added to every cell.
    """

    soil_weight: float = 5.0
    history_weight: float = 20.0
    history_decay: float = 15.0
    enemy_weight: float = 20.0
    enemy_decay: float = 30.0
    floor_cost: float = 0.1

    def __post_init__(self):
        for name in ("soil_weight", "history_weight", "enemy_weight"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValidationError(f"{name} must be finite and >= 0, got {v}")
        for name in ("history_decay", "enemy_decay"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be finite and > 0, got {v}")
        if not (math.isfinite(self.floor_cost) and self.floor_cost > 0):
            raise ValidationError(f"floor_cost must be finite and > 0, got {self.floor_cost}")


@dataclass(frozen=True)
class TacticalPicture:
    """Cells that attract proximity penalties.

    enemy_cells are known hostile positions; history_cells are cells
    used by earlier traffic over the same ground.  Either set may be
    empty, in which case the matching penalty is zero everywhere.
    """

    enemy_cells: frozenset[CellIndex] = frozenset()
    history_cells: frozenset[CellIndex] = frozenset()

    @staticmethod
    def of(enemy: Iterable[tuple[int, int]] = (),
           history: Iterable[tuple[int, int]] = ()) -> "TacticalPicture":
        return TacticalPicture(
            enemy_cells=frozenset(CellIndex(int(r), int(c)) for r, c in enemy),
            history_cells=frozenset(CellIndex(int(r), int(c)) for r, c in history),
        )


@dataclass(frozen=True, eq=False)
class CostField:
    """Composite cost and its components, one value per cell.

    All arrays have the grid's shape.  total = soil + history + enemy
    + floor_cost holds exactly (same summation order as the builder).
    Distance arrays are +inf when the corresponding source set is empty.
    """

    soil: np.ndarray
    history: np.ndarray
    enemy: np.ndarray
    floor_cost: float
    total: np.ndarray
    history_distance: np.ndarray
    enemy_distance: np.ndarray

    def __post_init__(self):
        for name in ("soil", "history", "enemy", "total", "history_distance", "enemy_distance"):
            getattr(self, name).setflags(write=False)


def soil_penalty(coef, vci50, rci):
    """Penalty for ground weaker than the vehicle needs.

    coef * (vci50 - rci) where vci50 >= rci, else 0.  Accepts a scalar
    or an ndarray for rci and returns the matching type.
    """
    if not (math.isfinite(coef) and coef >= 0):
        raise ValidationError(f"soil coefficient must be finite and >= 0, got {coef}")
    if not (math.isfinite(vci50) and vci50 > 0):
        raise ValidationError(f"vci50 must be positive, got {vci50}")
    values = np.asarray(rci, dtype=np.float64)
    if not (np.all(np.isfinite(values)) and np.all(values >= 0)):
        raise ValidationError("rci values must be finite and >= 0")
    out = np.where(vci50 >= values, coef * (vci50 - values), 0.0)
    return float(out) if np.isscalar(rci) else out


def proximity_penalty(coef, distance, decay):
    """Exponential distance-decay penalty coef * exp(-distance / decay).

    distance may be +inf (no source anywhere), which yields exactly 0.
    Accepts a scalar or an ndarray for distance.
    """
    if not (math.isfinite(coef) and coef >= 0):
        raise ValidationError(f"proximity coefficient must be finite and >= 0, got {coef}")
    if not (math.isfinite(decay) and decay > 0):
        raise ValidationError(f"decay length must be finite and > 0, got {decay}")
    values = np.asarray(distance, dtype=np.float64)
    if np.any(np.isnan(values)) or np.any(values < 0):
        raise ValidationError("distances must be >= 0 (inf allowed)")
    out = coef * np.exp(-(values / decay))
    return float(out) if np.isscalar(distance) else out


def distance_to_nearest(n_rows: int, n_cols: int,
                        sources: Iterable[tuple[int, int]]) -> np.ndarray:
    """Euclidean distance (in cells) from every cell to its nearest source.

    Sources on the cell itself give 0.  An empty source set gives +inf
    everywhere.  Exact for integer cell offsets: the value is
    sqrt(dr^2 + dc^2) of the true nearest source.
    """
    source_list = [CellIndex(int(r), int(c)) for r, c in sources]
    for cell in source_list:
        if not (0 <= cell.row < n_rows and 0 <= cell.col < n_cols):
            raise ValidationError(
                f"source cell {tuple(cell)} outside {n_rows}x{n_cols} grid"
            )
    if not source_list:
        return np.full((n_rows, n_cols), np.inf)

    mask = np.zeros((n_rows, n_cols), dtype=bool)
    rows = [c.row for c in source_list]
    cols = [c.col for c in source_list]
    mask[rows, cols] = True
    # distance_transform_edt can return the distances directly, but its
    # internal float math is not guaranteed exact for ties; the nearest
    # indices are, and sqrt of an exact integer square is correctly
    # rounded.
    idx = distance_transform_edt(~mask, return_distances=False, return_indices=True)
    rr, cc = np.indices((n_rows, n_cols))
    dr = rr - idx[0]
    dc = cc - idx[1]
    return np.sqrt((dr * dr + dc * dc).astype(np.float64))


def build_cost_field(grid: TerrainGrid, vehicle: Vehicle, weights: RiskWeights,
                     picture: TacticalPicture) -> CostField:
    """Evaluate every cost component over the whole grid.

    Nodata cells get a zero soil component (they are excluded from the
    route graph entirely, so their cost only matters for display).
    Every tactical-picture cell must lie on mapped, passable ground.
    """
    for label, cells in (("enemy", picture.enemy_cells),
                         ("history", picture.history_cells)):
        for cell in cells:
            if not grid.in_bounds(cell):
                raise ValidationError(f"{label} cell {tuple(cell)} outside grid")
            if not grid.is_passable(cell):
                raise ValidationError(
                    f"{label} cell {tuple(cell)} lies on nodata ground"
                )

    rci_eff = np.where(grid.nodata_mask, vehicle.vci50, grid.rci)
    soil = soil_penalty(weights.soil_weight, vehicle.vci50, rci_eff)
    d_hist = distance_to_nearest(grid.n_rows, grid.n_cols, picture.history_cells)
    d_enemy = distance_to_nearest(grid.n_rows, grid.n_cols, picture.enemy_cells)
    history = proximity_penalty(weights.history_weight, d_hist, weights.history_decay)
    enemy = proximity_penalty(weights.enemy_weight, d_enemy, weights.enemy_decay)
    total = soil + history + enemy + weights.floor_cost
    return CostField(
        soil=soil,
        history=history,
        enemy=enemy,
        floor_cost=weights.floor_cost,
        total=total,
        history_distance=d_hist,
        enemy_distance=d_enemy,
    )
