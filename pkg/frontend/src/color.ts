/** Color scales for the soil-strength raster and route overlays. */

export const NODATA_COLOR = "#2b2b33";
export const CURRENT_ROUTE_COLOR = "#1d6ef2";
export const COMMITTED_ROUTE_COLOR = "#111111";
export const START_COLOR = "#0a8f3c";
export const END_COLOR = "#c2269b";
export const ENEMY_COLOR = "#d42a1e";

/**
 * Map an RCI value onto a brown-to-green ramp: weak soil dark brown,
 * strong soil green. Values are normalized into [lo, hi]; a collapsed
 * range paints everything mid-ramp.
 */
export function rciColor(value: number, lo: number, hi: number): string {
  const span = hi - lo;
  let t = span > 0 ? (value - lo) / span : 0.5;
  t = Math.min(1, Math.max(0, t));
  // piecewise ramp: #5c4022 -> #c9b458 -> #3f9e4d
  const stops: [number, number, number][] = [
    [92, 64, 34],
    [201, 180, 88],
    [63, 158, 77],
  ];
  const scaled = t * (stops.length - 1);
  const k = Math.min(stops.length - 2, Math.floor(scaled));
  const frac = scaled - k;
  const a = stops[k]!;
  const b = stops[k + 1]!;
  const mix = (i: number) => Math.round(a[i]! + (b[i]! - a[i]!) * frac);
  return `rgb(${mix(0)}, ${mix(1)}, ${mix(2)})`;
}
