"""Soil-strength rasters: ESRI ASCII grid I/O and synthetic terrain.

A terrain grid stores one rating-cone-index (RCI) value per cell, in psi.
Cell (0, 0) is the northwest corner; rows grow southward, columns grow
eastward, matching the row order of the ASCII grid format.  The grid
origin is the map coordinate of the southwest corner, so converting a
cell index to map coordinates flips the row axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .errors import GridParseError, ValidationError

NODATA_DEFAULT = -9999.0

# Header keys in canonical write order.  xllcorner/yllcorner locate the
# southwest corner of the raster, cellsize is the square cell edge in
# map units (meters here).
_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")


class CellIndex(NamedTuple):
    """Grid position as (row, col), row 0 at the north edge."""

    row: int
    col: int


@dataclass(frozen=True, eq=False)
class TerrainGrid:
    """Rasterized soil-strength map.

    Attributes
    ----------
    n_rows, n_cols : int
        Grid shape, both at least 1.
    cell_size : float
        Cell edge length in meters, strictly positive.
    origin : tuple[float, float]
        (easting, northing) of the southwest raster corner.
    rci : ndarray of float64, shape (n_rows, n_cols)
        Soil strength per cell in psi.  Cells flagged in ``nodata_mask``
        hold NaN; every other value is finite and non-negative.
    nodata_mask : ndarray of bool, shape (n_rows, n_cols)
        True where no measurement exists.  Nodata cells are impassable.
    """

    n_rows: int
    n_cols: int
    cell_size: float
    origin: tuple[float, float]
    rci: np.ndarray
    nodata_mask: np.ndarray

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise ValidationError(
                f"grid shape must be at least 1x1, got {self.n_rows}x{self.n_cols}"
            )
        if not (math.isfinite(self.cell_size) and self.cell_size > 0):
            raise ValidationError(f"cell_size must be positive, got {self.cell_size}")
        if not all(math.isfinite(v) for v in self.origin):
            raise ValidationError(f"origin must be finite, got {self.origin}")
        rci = np.ascontiguousarray(self.rci, dtype=np.float64)
        mask = np.ascontiguousarray(self.nodata_mask, dtype=bool)
        shape = (self.n_rows, self.n_cols)
        if rci.shape != shape:
            raise ValidationError(f"rci shape {rci.shape} does not match {shape}")
        if mask.shape != shape:
            raise ValidationError(f"nodata_mask shape {mask.shape} does not match {shape}")
        valid = rci[~mask]
        if valid.size and not (np.all(np.isfinite(valid)) and np.all(valid >= 0)):
            raise ValidationError("rci values must be finite and >= 0 outside nodata cells")
        rci = rci.copy()
        rci[mask] = np.nan
        rci.setflags(write=False)
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, "rci", rci)
        object.__setattr__(self, "nodata_mask", mask)

    def __eq__(self, other):
        if not isinstance(other, TerrainGrid):
            return NotImplemented
        return (
            self.n_rows == other.n_rows
            and self.n_cols == other.n_cols
            and self.cell_size == other.cell_size
            and self.origin == other.origin
            and np.array_equal(self.nodata_mask, other.nodata_mask)
            and np.array_equal(
                self.rci[~self.nodata_mask], other.rci[~other.nodata_mask]
            )
        )

    __hash__ = None

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def in_bounds(self, cell: CellIndex) -> bool:
        return 0 <= cell[0] < self.n_rows and 0 <= cell[1] < self.n_cols

    def is_passable(self, cell: CellIndex) -> bool:
        return self.in_bounds(cell) and not self.nodata_mask[cell[0], cell[1]]

    def cell_center(self, cell: CellIndex) -> tuple[float, float]:
        """Map (easting, northing) of a cell's center.

        Row 0 is the northernmost row, so its centers sit cellsize/2
        below the top edge at northing = yllcorner + nrows*cellsize.
        """
        if not self.in_bounds(cell):
            raise ValidationError(f"cell {tuple(cell)} outside {self.n_rows}x{self.n_cols} grid")
        east = self.origin[0] + (cell[1] + 0.5) * self.cell_size
        north = self.origin[1] + (self.n_rows - cell[0] - 0.5) * self.cell_size
        return (east, north)


def _parse_header_value(key: str, token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise GridParseError(
            f"line {line_no}: header value for '{key}' is not numeric: {token!r}"
        ) from None
    if key in ("ncols", "nrows") and (not value.is_integer() or value < 1):
        raise GridParseError(f"line {line_no}: '{key}' must be a positive integer, got {token}")
    return value


def parse_ascii_grid(text: str) -> TerrainGrid:
    """Parse an ESRI ASCII grid into a TerrainGrid.

    The header holds ncols, nrows, xllcorner, yllcorner, cellsize in
    that order, optionally followed by NODATA_value.  Keys are matched
    case-insensitively.  Data values follow in row-major order starting
    from the northernmost row; line breaks inside the data block are
    not significant.

    Raises
    ------
    GridParseError
        Malformed header, non-numeric tokens, or a value-count mismatch.
    ValidationError
        Header parses but violates grid preconditions (for example a
        non-positive cellsize).
    """
    lines = text.splitlines()
    header: dict[str, float] = {}
    nodata = None
    data_start = 0
    expected = list(_HEADER_KEYS) + ["nodata_value"]
    for line_no, line in enumerate(lines, start=1):
        parts = line.split()
        if not parts:
            data_start = line_no
            continue
        key = parts[0].lower()
        if key not in expected:
            break
        if len(parts) != 2:
            raise GridParseError(
                f"line {line_no}: header line must be 'key value', got {line.strip()!r}"
            )
        if key in header or (key == "nodata_value" and nodata is not None):
            raise GridParseError(f"line {line_no}: duplicate header key '{parts[0]}'")
        value = _parse_header_value(key, parts[1], line_no)
        if key == "nodata_value":
            nodata = value
        else:
            header[key] = value
        data_start = line_no

    missing = [k for k in _HEADER_KEYS if k not in header]
    if missing:
        raise GridParseError(f"missing header keys: {', '.join(missing)}")

    n_rows = int(header["nrows"])
    n_cols = int(header["ncols"])
    tokens = "\n".join(lines[data_start:]).split()
    if len(tokens) != n_rows * n_cols:
        raise GridParseError(
            f"expected {n_rows * n_cols} data values ({n_rows} rows x {n_cols} cols), "
            f"found {len(tokens)}"
        )
    try:
        flat = np.array([float(t) for t in tokens], dtype=np.float64)
    except ValueError:
        bad = next(t for t in tokens if not _is_float(t))
        raise GridParseError(f"non-numeric data value: {bad!r}") from None

    rci = flat.reshape(n_rows, n_cols)
    if nodata is not None:
        mask = rci == nodata
    else:
        mask = np.zeros((n_rows, n_cols), dtype=bool)
    return TerrainGrid(
        n_rows=n_rows,
        n_cols=n_cols,
        cell_size=header["cellsize"],
        origin=(header["xllcorner"], header["yllcorner"]),
        rci=rci,
        nodata_mask=mask,
    )


def _is_float(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def serialize_ascii_grid(grid: TerrainGrid, nodata_value: float = NODATA_DEFAULT) -> str:
    """Render a TerrainGrid as ESRI ASCII text.

    Values are written with repr(), which round-trips float64 exactly,
    so parse(serialize(grid)) reproduces every stored value bit for bit.
    """
    out = [
        f"ncols {grid.n_cols}",
        f"nrows {grid.n_rows}",
        f"xllcorner {grid.origin[0]!r}",
        f"yllcorner {grid.origin[1]!r}",
        f"cellsize {grid.cell_size!r}",
        f"NODATA_value {nodata_value!r}",
    ]
    values = np.where(grid.nodata_mask, nodata_value, grid.rci)
    for row in values:
        out.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(out) + "\n"


def load_ascii_grid(path: str | Path) -> TerrainGrid:
    return parse_ascii_grid(Path(path).read_text())


def save_ascii_grid(grid: TerrainGrid, path: str | Path) -> None:
    Path(path).write_text(serialize_ascii_grid(grid))


@dataclass(frozen=True)
class TerrainParams:
    """Knobs for the synthetic terrain generator.

    base_rci is the open-ground soil strength; each valley carves
    downward by up to valley_depth.  smoothness controls both the
    meander wavelength and the valley width, in cells.
    """

    base_rci: float = 80.0
    valley_depth: float = 40.0
    valley_count: int = 3
    smoothness: float = 6.0

    def __post_init__(self):
        if not (math.isfinite(self.base_rci) and self.base_rci >= 0):
            raise ValidationError(f"base_rci must be >= 0, got {self.base_rci}")
        if not (math.isfinite(self.valley_depth) and 0 <= self.valley_depth <= self.base_rci):
            raise ValidationError(
                f"valley_depth must lie in [0, base_rci], got {self.valley_depth}"
            )
        if self.valley_count < 0:
            raise ValidationError(f"valley_count must be >= 0, got {self.valley_count}")
        if not (math.isfinite(self.smoothness) and self.smoothness > 0):
            raise ValidationError(f"smoothness must be > 0, got {self.smoothness}")


def _meander_cells(rng: np.random.Generator, n_rows: int, n_cols: int,
                   smoothness: float) -> tuple[np.ndarray, np.ndarray]:
    """Trace one meandering valley centerline across the grid.

    Returns (rows, cols) index arrays for the cells on the centerline.
    The line spans the longer axis end to end; its cross-axis position
    is a random walk smoothed over roughly 4*smoothness steps.
    """
    across_rows = n_cols >= n_rows
    length = n_cols if across_rows else n_rows
    span = n_rows if across_rows else n_cols

    steps = rng.normal(0.0, 1.0, size=length)
    walk = np.cumsum(steps)
    width = max(3, int(round(4.0 * smoothness)))
    kernel = np.ones(width) / width
    walk = np.convolve(walk, kernel, mode="same")
    spread = np.ptp(walk)
    if spread > 0:
        amplitude = rng.uniform(0.2, 0.45) * (span - 1)
        walk = (walk - walk.min()) / spread * amplitude
    center = rng.uniform(0.2, 0.8) * (span - 1)
    offset = walk - walk.mean() + center
    offset = np.clip(np.rint(offset).astype(np.int64), 0, span - 1)

    # Bridge any cross-axis jumps so the centerline stays connected.
    rows_out: list[int] = []
    cols_out: list[int] = []
    for i in range(length):
        a = offset[i - 1] if i else offset[i]
        b = offset[i]
        lo, hi = (a, b) if a <= b else (b, a)
        for c in range(lo, hi + 1):
            rows_out.append(c if across_rows else i)
            cols_out.append(i if across_rows else c)
    return np.array(rows_out), np.array(cols_out)


def generate_synthetic_terrain(
    seed: int,
    n_rows: int,
    n_cols: int,
    cell_size: float,
    params: TerrainParams = TerrainParams(),
    origin: tuple[float, float] = (0.0, 0.0),
) -> TerrainGrid:
    """Build a deterministic synthetic soil-strength map.

    The map starts at params.base_rci everywhere and is carved by
    params.valley_count meandering soft-soil valleys with Gaussian
    cross-sections.  Equal arguments always produce an identical grid;
    the generator derives all randomness from ``seed``.
    """
    if n_rows < 2 or n_cols < 2:
        raise ValidationError(f"synthetic terrain needs at least 2x2 cells, got {n_rows}x{n_cols}")
    if not (math.isfinite(cell_size) and cell_size > 0):
        raise ValidationError(f"cell_size must be positive, got {cell_size}")

    from scipy.ndimage import distance_transform_edt

    rng = np.random.default_rng(seed)
    relief = np.zeros((n_rows, n_cols))
    half_width = 2.0 * params.smoothness
    for _ in range(params.valley_count):
        rows, cols = _meander_cells(rng, n_rows, n_cols, params.smoothness)
        on_line = np.zeros((n_rows, n_cols), dtype=bool)
        on_line[rows, cols] = True
        dist = distance_transform_edt(~on_line)
        relief = np.maximum(relief, params.valley_depth * np.exp(-((dist / half_width) ** 2)))

    rci = np.maximum(params.base_rci - relief, 0.0)
    return TerrainGrid(
        n_rows=n_rows,
        n_cols=n_cols,
        cell_size=cell_size,
        origin=origin,
        rci=rci,
        nodata_mask=np.zeros((n_rows, n_cols), dtype=bool),
    )


def scale_rci(grid: TerrainGrid, factor: float) -> TerrainGrid:
    """Return a copy of the grid with every RCI value multiplied by factor.

    Factors above 1 are allowed (soil strengthening); factor must be a
    positive finite number.
    """
    if not (math.isfinite(factor) and factor > 0):
        raise ValidationError(f"scale factor must be positive and finite, got {factor}")
    scaled = np.where(grid.nodata_mask, 0.0, grid.rci * factor)
    return replace(grid, rci=scaled, nodata_mask=grid.nodata_mask)


def cells_as_tuples(cells: Iterable[tuple[int, int]]) -> tuple[CellIndex, ...]:
    """Normalize an iterable of (row, col) pairs to CellIndex tuples."""
    return tuple(CellIndex(int(r), int(c)) for r, c in cells)
