/** View model for one planning session, kept free of DOM concerns. */

import type {
  CommittedRoute,
  ScenarioDoc,
  SolveResponse,
  TerrainRaster,
  Weights,
} from "./api.js";

/** What a click on the map currently places. */
export type Placement = "start" | "end" | "enemy";

export interface VehiclePreset {
  name: string;
  vci50: number;
}

/** Soil demand presets from light wheeled up to heavy hauler. */
export const VEHICLE_PRESETS: VehiclePreset[] = [
  { name: "light-recon", vci50: 35 },
  { name: "tracked-engineer", vci50: 54 },
  { name: "wheeled-transport", vci50: 72 },
  { name: "heavy-hauler", vci50: 97 },
];

export const DEFAULT_WEIGHTS: Weights = {
  P: 5.0,
  H: 20.0,
  R: 20.0,
  k_h: 15.0,
  k_r: 30.0,
  mu: 0.1,
};

export interface SessionView {
  terrain: TerrainRaster | null;
  vehicle: VehiclePreset;
  weights: Weights;
  start: [number, number] | null;
  end: [number, number] | null;
  enemy: [number, number][];
  placement: Placement;
  currentSolve: SolveResponse | null;
  committed: CommittedRoute[];
  status: string;
}

export function initialView(): SessionView {
  return {
    terrain: null,
    vehicle: VEHICLE_PRESETS[1]!,
    weights: { ...DEFAULT_WEIGHTS },
    start: null,
    end: null,
    enemy: [],
    placement: "start",
    currentSolve: null,
    committed: [],
    status: "load terrain to begin",
  };
}

function sameCell(a: [number, number], b: [number, number]): boolean {
  return a[0] === b[0] && a[1] === b[1];
}

/**
 * Apply a map click under the active placement mode. Start and end
 * moves replace the old marker; enemy clicks toggle the cell. Any
 * change invalidates the current solve, since it no longer matches
 * the scenario on screen.
 */
export function placeCell(
  view: SessionView,
  cell: [number, number],
): SessionView {
  const next: SessionView = { ...view, currentSolve: null };
  if (view.placement === "start") {
    next.start = cell;
  } else if (view.placement === "end") {
    next.end = cell;
  } else {
    const kept = view.enemy.filter((c) => !sameCell(c, cell));
    next.enemy =
      kept.length === view.enemy.length ? [...view.enemy, cell] : kept;
  }
  return next;
}

/** True once the scenario has everything the service requires. */
export function scenarioReady(view: SessionView): boolean {
  return view.terrain !== null && view.start !== null && view.end !== null;
}

/** Wire document for PUT /scenario. Throws if the view is incomplete. */
export function scenarioDoc(view: SessionView): ScenarioDoc {
  if (!scenarioReady(view)) {
    throw new Error("scenario is incomplete: set terrain, start, and end");
  }
  return {
    vehicle: { name: view.vehicle.name, vci50: view.vehicle.vci50 },
    weights: { ...view.weights },
    start: view.start!,
    end: view.end!,
    enemy: view.enemy.map((c) => [...c] as [number, number]),
  };
}

/** Record a solve response as the route currently on screen. */
export function recordSolve(
  view: SessionView,
  solve: SolveResponse,
): SessionView {
  const r = solve.report;
  return {
    ...view,
    currentSolve: solve,
    status:
      `pass ${r.phase}: objective ${r.objective.toFixed(2)}, ` +
      `${r.step_count} steps, ${r.length_km.toFixed(2)} km`,
  };
}

/** Move the current route into the committed overlay set. */
export function recordCommit(view: SessionView): SessionView {
  const solve = view.currentSolve;
  if (!solve) return view;
  const already = view.committed.some((c) => c.route_id === solve.route_id);
  return {
    ...view,
    committed: already
      ? view.committed
      : [
          ...view.committed,
          {
            route_id: solve.route_id,
            cells: solve.cells,
            report: solve.report,
          },
        ],
    currentSolve: null,
    status: `committed ${solve.route_id}; next solve avoids this ground`,
  };
}
