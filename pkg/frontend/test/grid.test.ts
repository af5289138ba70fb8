import { describe, expect, it } from "vitest";

import { cellCenter, cellToPixel, fitViewport, pixelToCell } from "../src/grid";

describe("fitViewport", () => {
  it("picks the largest integer scale that fits", () => {
    const view = fitViewport({ nRows: 100, nCols: 100 }, 640, 640);
    expect(view.scale).toBe(6);
    expect(view.width).toBe(600);
    expect(view.height).toBe(600);
  });

  it("never drops below one pixel per cell", () => {
    const view = fitViewport({ nRows: 1000, nCols: 1000 }, 300, 300);
    expect(view.scale).toBe(1);
  });

  it("respects the tighter axis on non-square grids", () => {
    const view = fitViewport({ nRows: 50, nCols: 200 }, 600, 600);
    expect(view.scale).toBe(3);
    expect(view.width).toBe(600);
    expect(view.height).toBe(150);
  });
});

describe("cell and pixel mapping", () => {
  const view = fitViewport({ nRows: 10, nCols: 10 }, 100, 100);

  it("maps cell (0,0) to the origin corner", () => {
    expect(cellToPixel(0, 0, view)).toEqual([0, 0]);
  });

  it("centers are offset half a cell", () => {
    expect(cellCenter(0, 0, view)).toEqual([5, 5]);
    expect(cellCenter(2, 3, view)).toEqual([35, 25]);
  });

  it("snaps pixels back to the cell under them", () => {
    expect(pixelToCell(0, 0, { nRows: 10, nCols: 10 }, view)).toEqual([0, 0]);
    expect(pixelToCell(9, 9, { nRows: 10, nCols: 10 }, view)).toEqual([0, 0]);
    expect(pixelToCell(10, 0, { nRows: 10, nCols: 10 }, view)).toEqual([0, 1]);
    expect(pixelToCell(99, 99, { nRows: 10, nCols: 10 }, view)).toEqual([9, 9]);
  });

  it("rejects pixels outside the grid", () => {
    expect(pixelToCell(100, 5, { nRows: 10, nCols: 10 }, view)).toBeNull();
    expect(pixelToCell(-1, 5, { nRows: 10, nCols: 10 }, view)).toBeNull();
  });

  it("round-trips every cell through its center", () => {
    const shape = { nRows: 10, nCols: 10 };
    for (let r = 0; r < 10; r++) {
      for (let c = 0; c < 10; c++) {
        const [x, y] = cellCenter(r, c, view);
        expect(pixelToCell(x, y, shape, view)).toEqual([r, c]);
      }
    }
  });
});
