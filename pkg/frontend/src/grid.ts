/** Pixel-space geometry for a row/column grid drawn on a canvas. */

export interface GridShape {
  nRows: number;
  nCols: number;
}

export interface Viewport {
  /** Pixel size of one cell (square). */
  scale: number;
  /** Canvas pixel width and height the grid occupies. */
  width: number;
  height: number;
}

/** Largest integer cell size that fits the grid into the given box. */
export function fitViewport(
  shape: GridShape,
  maxWidth: number,
  maxHeight: number,
): Viewport {
  const scale = Math.max(
    1,
    Math.floor(Math.min(maxWidth / shape.nCols, maxHeight / shape.nRows)),
  );
  return {
    scale,
    width: shape.nCols * scale,
    height: shape.nRows * scale,
  };
}

/** Top-left pixel of a cell. */
export function cellToPixel(
  row: number,
  col: number,
  view: Viewport,
): [number, number] {
  return [col * view.scale, row * view.scale];
}

/** Center pixel of a cell, for markers and route polylines. */
export function cellCenter(
  row: number,
  col: number,
  view: Viewport,
): [number, number] {
  return [(col + 0.5) * view.scale, (row + 0.5) * view.scale];
}

/**
 * Snap a pixel position to the cell under it, or null outside the
 * grid. This is what makes clicked markers land on exact cells.
 */
export function pixelToCell(
  x: number,
  y: number,
  shape: GridShape,
  view: Viewport,
): [number, number] | null {
  const col = Math.floor(x / view.scale);
  const row = Math.floor(y / view.scale);
  if (row < 0 || row >= shape.nRows || col < 0 || col >= shape.nCols) {
    return null;
  }
  return [row, col];
}
