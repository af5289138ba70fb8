/** Canvas painting for the raster backdrop and the route overlays.
 *
 * Functions take the narrow slice of CanvasRenderingContext2D they
 * use, so tests can pass a recording stub instead of a real canvas.
 */

import type { TerrainRaster } from "./api.js";
import {
  COMMITTED_ROUTE_COLOR,
  CURRENT_ROUTE_COLOR,
  ENEMY_COLOR,
  END_COLOR,
  NODATA_COLOR,
  START_COLOR,
  rciColor,
} from "./color.js";
import { cellCenter, cellToPixel, type Viewport } from "./grid.js";

export interface PaintContext {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  stroke(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
}

export function paintRaster(
  ctx: PaintContext,
  terrain: TerrainRaster,
  view: Viewport,
): void {
  const values = terrain.rci.filter((v): v is number => v !== null);
  const lo = values.length ? Math.min(...values) : 0;
  const hi = values.length ? Math.max(...values) : 1;
  for (let row = 0; row < terrain.n_rows; row++) {
    for (let col = 0; col < terrain.n_cols; col++) {
      const v = terrain.rci[row * terrain.n_cols + col];
      ctx.fillStyle = v === null || v === undefined ? NODATA_COLOR : rciColor(v, lo, hi);
      const [x, y] = cellToPixel(row, col, view);
      ctx.fillRect(x, y, view.scale, view.scale);
    }
  }
}

export function paintRoute(
  ctx: PaintContext,
  cells: [number, number][],
  view: Viewport,
  color: string,
  width: number,
): void {
  if (cells.length < 2) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  const first = cells[0]!;
  const [x0, y0] = cellCenter(first[0], first[1], view);
  ctx.moveTo(x0, y0);
  for (let i = 1; i < cells.length; i++) {
    const [r, c] = cells[i]!;
    const [x, y] = cellCenter(r, c, view);
    ctx.lineTo(x, y);
  }
  ctx.stroke();
}

export function paintCommittedRoutes(
  ctx: PaintContext,
  routes: { cells: [number, number][] }[],
  view: Viewport,
): void {
  for (const route of routes) {
    paintRoute(ctx, route.cells, view, COMMITTED_ROUTE_COLOR, 2);
  }
}

export function paintCurrentRoute(
  ctx: PaintContext,
  cells: [number, number][],
  view: Viewport,
): void {
  paintRoute(ctx, cells, view, CURRENT_ROUTE_COLOR, 3);
}

function paintDot(
  ctx: PaintContext,
  cell: [number, number],
  view: Viewport,
  color: string,
): void {
  const [x, y] = cellCenter(cell[0], cell[1], view);
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(x, y, Math.max(3, view.scale * 0.6), 0, Math.PI * 2);
  ctx.fill();
}

export function paintMarkers(
  ctx: PaintContext,
  start: [number, number] | null,
  end: [number, number] | null,
  enemy: [number, number][],
  view: Viewport,
): void {
  for (const cell of enemy) paintDot(ctx, cell, view, ENEMY_COLOR);
  if (start) paintDot(ctx, start, view, START_COLOR);
  if (end) paintDot(ctx, end, view, END_COLOR);
}
