/** Scale and path helpers shared by the views. */

import { curveBasis, curveLinear, curveStep, line } from "d3-shape";
import type { CurveStyle } from "./types";

export const CURVE_FACTORIES = {
  linear: curveLinear,
  step: curveStep,
  basis: curveBasis,
} as const;

export function xScale(
  domain: { start: number; end: number },
  width: number,
): (t: number) => number {
  const span = Math.max(domain.end - domain.start, 1e-9);
  return (t) => ((t - domain.start) / span) * width;
}

export function yScale(height: number, lo = 0, hi = 1): (v: number) => number {
  return (v) => height - ((v - lo) / (hi - lo)) * height;
}

/** SVG path string for one series under a curve style and zoom window. */
export function seriesPath(
  values: number[],
  style: CurveStyle,
  domain: { start: number; end: number },
  width: number,
  height: number,
): string {
  const sx = xScale(domain, width);
  const sy = yScale(height);
  const gen = line<number>()
    .x((_, i) => sx(i))
    .y((v) => sy(v))
    .curve(CURVE_FACTORIES[style]);
  const lo = Math.max(0, Math.floor(domain.start));
  const hi = Math.min(values.length - 1, Math.ceil(domain.end));
  return gen(values.slice(lo, hi + 1).map((v) => v)) ?? "";
}

/** Draw order honoring render precedence: the preferred class paints last. */
export function drawOrder(labels: number[], visible: number[], precedence: 0 | 1): number[] {
  const first = visible.filter((i) => labels[i] !== precedence);
  const last = visible.filter((i) => labels[i] === precedence);
  return [...first, ...last];
}

/** Centered-streamgraph outline for one class of one signature: mirrored
 * widths around a vertical axis, score (grid) increasing upward. Returns an
 * SVG polygon `points` string; widths are the bundle's normalized densities
 * scaled by `halfWidth` pixels. */
export function streamPolygon(
  widths: number[],
  grid: number[],
  cx: number,
  halfWidth: number,
  height: number,
): string {
  const sy = yScale(height);
  const up = grid.map((g, i) => `${cx + widths[i] * halfWidth},${sy(g)}`);
  const down = grid
    .map((g, i) => `${cx - widths[i] * halfWidth},${sy(g)}`)
    .reverse();
  return [...up, ...down].join(" ");
}

export function polylinePoints(
  values: number[],
  x0: number,
  step: number,
  height: number,
): string {
  const sy = yScale(height);
  return values.map((v, i) => `${x0 + i * step},${sy(v)}`).join(" ");
}

/** Categorical signature colors (distinct from the two class colors). */
export const SIGNATURE_COLORS = [
  "#59a14f", "#e15759", "#b07aa1", "#edc948", "#76b7b2",
  "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
];

export function signatureColor(rankIndex: number): string {
  return SIGNATURE_COLORS[rankIndex % SIGNATURE_COLORS.length];
}
