/** DOM wiring: controls on the left, the map canvas on the right. */

import { ApiError, PlannerClient, type SolveReport } from "./api.js";
import { fitViewport, pixelToCell, type Viewport } from "./grid.js";
import {
  paintCommittedRoutes,
  paintCurrentRoute,
  paintMarkers,
  paintRaster,
} from "./render.js";
import {
  DEFAULT_WEIGHTS,
  initialView,
  placeCell,
  recordCommit,
  recordSolve,
  scenarioDoc,
  scenarioReady,
  VEHICLE_PRESETS,
  type Placement,
  type SessionView,
} from "./state.js";

// Same-origin by default; `?api=http://127.0.0.1:8000` points the page
// at a service running elsewhere.
const apiBase = new URLSearchParams(window.location.search).get("api") ?? "";
const client = new PlannerClient(apiBase);
let view: SessionView = initialView();
let viewport: Viewport = { scale: 1, width: 1, height: 1 };

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

const canvas = el<HTMLCanvasElement>("map");
const statusLine = el<HTMLElement>("status");
const reportPanel = el<HTMLElement>("report");

function setStatus(text: string): void {
  view = { ...view, status: text };
  statusLine.textContent = text;
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) return `${err.status}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}

function repaint(): void {
  const ctx = canvas.getContext("2d");
  if (!ctx || !view.terrain) return;
  paintRaster(ctx, view.terrain, viewport);
  paintCommittedRoutes(ctx, view.committed, viewport);
  if (view.currentSolve) {
    paintCurrentRoute(ctx, view.currentSolve.cells, viewport);
  }
  paintMarkers(ctx, view.start, view.end, view.enemy, viewport);
}

const REPORT_ROWS: [keyof SolveReport, string][] = [
  ["phase", "pass"],
  ["objective", "objective"],
  ["soil_risk", "soil risk"],
  ["history_risk", "history risk"],
  ["enemy_risk", "enemy risk"],
  ["mu_total", "step floor"],
  ["risk_total", "risk total"],
  ["step_count", "steps"],
  ["length_km", "length (km)"],
];

function renderReport(report: SolveReport | null): void {
  if (!report) {
    reportPanel.innerHTML = "<p>no route yet</p>";
    return;
  }
  const rows = REPORT_ROWS.map(([key, label]) => {
    const value = report[key];
    const shown =
      typeof value === "number" && !Number.isInteger(value)
        ? value.toFixed(4)
        : String(value);
    return `<tr><td>${label}</td><td>${shown}</td></tr>`;
  });
  reportPanel.innerHTML = `<table>${rows.join("")}</table>`;
}

async function loadTerrain(): Promise<void> {
  const seed = Number(el<HTMLInputElement>("seed").value);
  const size = Number(el<HTMLInputElement>("size").value);
  try {
    setStatus("generating terrain...");
    await client.loadSyntheticTerrain({
      synthetic: {
        seed,
        n_rows: size,
        n_cols: size,
        cell_size: 100.0,
        base_rci: 80.0,
        valley_depth: 70.0,
        valley_count: 3,
        smoothness: 6.0,
      },
    });
    const raster = await client.terrainRaster();
    view = {
      ...initialView(),
      terrain: raster,
      vehicle: view.vehicle,
      weights: view.weights,
      placement: view.placement,
    };
    viewport = fitViewport(
      { nRows: raster.n_rows, nCols: raster.n_cols },
      canvas.parentElement?.clientWidth ?? 640,
      640,
    );
    canvas.width = viewport.width;
    canvas.height = viewport.height;
    renderReport(null);
    repaint();
    setStatus(
      `terrain ${raster.n_rows}x${raster.n_cols} loaded; click to place start`,
    );
  } catch (err) {
    setStatus(`terrain load failed ${describeError(err)}`);
  }
}

function readWeights(): void {
  const weights = { ...DEFAULT_WEIGHTS };
  for (const key of Object.keys(weights) as (keyof typeof weights)[]) {
    const raw = Number(el<HTMLInputElement>(`w-${key}`).value);
    if (Number.isFinite(raw)) weights[key] = raw;
  }
  view = { ...view, weights, currentSolve: null };
}

async function solve(): Promise<void> {
  if (!scenarioReady(view)) {
    setStatus("place start and end first");
    return;
  }
  try {
    readWeights();
    setStatus("solving...");
    await client.setScenario(scenarioDoc(view));
    const solved = await client.solve();
    view = recordSolve(view, solved);
    renderReport(solved.report);
    repaint();
    setStatus(view.status);
  } catch (err) {
    setStatus(`solve failed ${describeError(err)}`);
  }
}

async function commit(): Promise<void> {
  const solve_ = view.currentSolve;
  if (!solve_) {
    setStatus("solve a route before committing it");
    return;
  }
  try {
    await client.commit(solve_.route_id);
    view = recordCommit(view);
    repaint();
    setStatus(view.status);
  } catch (err) {
    setStatus(`commit failed ${describeError(err)}`);
  }
}

async function clearHistory(): Promise<void> {
  try {
    const res = await client.clearHistory();
    view = { ...view, committed: [], currentSolve: null };
    renderReport(null);
    repaint();
    setStatus(`cleared ${res.cleared_routes} committed route(s)`);
  } catch (err) {
    setStatus(`clear failed ${describeError(err)}`);
  }
}

function wireControls(): void {
  const presetSelect = el<HTMLSelectElement>("vehicle");
  presetSelect.innerHTML = VEHICLE_PRESETS.map(
    (p, i) =>
      `<option value="${i}">${p.name} (vci50 ${p.vci50})</option>`,
  ).join("");
  presetSelect.selectedIndex = 1;
  presetSelect.addEventListener("change", () => {
    view = {
      ...view,
      vehicle: VEHICLE_PRESETS[presetSelect.selectedIndex]!,
      currentSolve: null,
    };
    repaint();
  });

  for (const [key, value] of Object.entries(DEFAULT_WEIGHTS)) {
    el<HTMLInputElement>(`w-${key}`).value = String(value);
  }

  for (const mode of ["start", "end", "enemy"] as Placement[]) {
    el<HTMLInputElement>(`place-${mode}`).addEventListener("change", () => {
      view = { ...view, placement: mode };
    });
  }

  canvas.addEventListener("click", (event) => {
    if (!view.terrain) return;
    const rect = canvas.getBoundingClientRect();
    const cell = pixelToCell(
      event.clientX - rect.left,
      event.clientY - rect.top,
      { nRows: view.terrain.n_rows, nCols: view.terrain.n_cols },
      viewport,
    );
    if (!cell) return;
    view = placeCell(view, cell);
    renderReport(null);
    repaint();
    setStatus(`${view.placement} set to (${cell[0]}, ${cell[1]})`);
  });

  el<HTMLButtonElement>("load-terrain").addEventListener("click", loadTerrain);
  el<HTMLButtonElement>("solve").addEventListener("click", solve);
  el<HTMLButtonElement>("commit").addEventListener("click", commit);
  el<HTMLButtonElement>("clear-history").addEventListener(
    "click",
    clearHistory,
  );
}

wireControls();
renderReport(null);
setStatus(view.status);
