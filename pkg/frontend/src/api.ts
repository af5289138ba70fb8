/** Typed client for the planning service HTTP API. */

export interface TerrainPreview {
  values: (number | null)[][];
  row_stride: number;
  col_stride: number;
}

export interface TerrainSummary {
  n_rows: number;
  n_cols: number;
  cell_size: number;
  origin: [number, number];
  rci_min: number | null;
  rci_max: number | null;
  nodata_count: number;
  preview: TerrainPreview;
}

export interface TerrainRaster {
  n_rows: number;
  n_cols: number;
  cell_size: number;
  origin: [number, number];
  rci: (number | null)[];
}

export interface Weights {
  P: number;
  H: number;
  R: number;
  k_h: number;
  k_r: number;
  mu: number;
}

export interface ScenarioDoc {
  vehicle: { name: string; vci50: number };
  weights: Weights;
  start: [number, number];
  end: [number, number];
  enemy: [number, number][];
}

export interface SolveReport {
  phase: number;
  soil_risk: number;
  history_risk: number;
  enemy_risk: number;
  mu_total: number;
  risk_total: number;
  objective: number;
  step_count: number;
  length_km: number;
}

export interface SolveResponse {
  route_id: string;
  cells: [number, number][];
  coordinates: [number, number][];
  report: SolveReport;
  history_cell_count: number;
}

export interface CommitResponse {
  route_id: string;
  already_committed: boolean;
  history_cell_count: number;
}

export interface CommittedRoute {
  route_id: string;
  cells: [number, number][];
  report: SolveReport;
}

export interface HistoryResponse {
  routes: CommittedRoute[];
  cells: [number, number][];
}

export interface SyntheticTerrainRequest {
  synthetic: {
    seed: number;
    n_rows: number;
    n_cols: number;
    cell_size: number;
    base_rci: number;
    valley_depth: number;
    valley_count: number;
    smoothness: number;
  };
}

/** Non-2xx responses surface as this, carrying the server's detail text. */
export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      /* non-JSON error body, keep the status text */
    }
    throw new ApiError(response.status, detail);
  }
  return response.json() as Promise<T>;
}

export class PlannerClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: typeof fetch = fetch.bind(globalThis),
  ) {}

  private url(path: string): string {
    return this.baseUrl + path;
  }

  loadSyntheticTerrain(req: SyntheticTerrainRequest): Promise<TerrainSummary> {
    return this.fetchFn(this.url("/terrain"), {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    }).then((r) => unwrap<TerrainSummary>(r));
  }

  loadAsciiTerrain(asciiGrid: string): Promise<TerrainSummary> {
    return this.fetchFn(this.url("/terrain"), {
      method: "PUT",
      headers: { "Content-Type": "text/plain" },
      body: asciiGrid,
    }).then((r) => unwrap<TerrainSummary>(r));
  }

  terrainSummary(): Promise<TerrainSummary> {
    return this.fetchFn(this.url("/terrain")).then((r) =>
      unwrap<TerrainSummary>(r),
    );
  }

  terrainRaster(): Promise<TerrainRaster> {
    return this.fetchFn(this.url("/terrain/raster")).then((r) =>
      unwrap<TerrainRaster>(r),
    );
  }

  setScenario(doc: ScenarioDoc): Promise<{ scenario: ScenarioDoc }> {
    return this.fetchFn(this.url("/scenario"), {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(doc),
    }).then((r) => unwrap<{ scenario: ScenarioDoc }>(r));
  }

  solve(): Promise<SolveResponse> {
    return this.fetchFn(this.url("/solve"), { method: "POST" }).then((r) =>
      unwrap<SolveResponse>(r),
    );
  }

  commit(routeId: string): Promise<CommitResponse> {
    return this.fetchFn(this.url("/history/commit"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ route_id: routeId }),
    }).then((r) => unwrap<CommitResponse>(r));
  }

  history(): Promise<HistoryResponse> {
    return this.fetchFn(this.url("/history")).then((r) =>
      unwrap<HistoryResponse>(r),
    );
  }

  clearHistory(): Promise<{ cleared_routes: number }> {
    return this.fetchFn(this.url("/history"), { method: "DELETE" }).then((r) =>
      unwrap<{ cleared_routes: number }>(r),
    );
  }
}
