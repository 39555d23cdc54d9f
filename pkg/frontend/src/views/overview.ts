/** Raw-series overview on canvas: every visible sample color-coded by class,
 * honoring curve style, opacity, zoom window, and render precedence. A
 * hover cursor marks the time step under the pointer and dragging pans the
 * zoom window. Canvas keeps thousands of series responsive; the painter
 * no-ops where 2d contexts are unavailable (jsdom), so all decision logic
 * lives in pure helpers. */

import { line } from "d3-shape";
import { CURVE_FACTORIES, drawOrder, xScale, yScale } from "../geometry";
import type { Bundle, ViewState } from "../types";

export interface OverviewCallbacks {
  onHover(timeStep: number | null): void;
  onPan?(deltaSteps: number): void;
}

// listeners are attached once per root but must see the latest render's
// state and callbacks, not the ones they closed over
const liveRefs = new WeakMap<HTMLElement, { state: ViewState; callbacks: OverviewCallbacks }>();

/** Shift a zoom window by a step delta, clamped to the series bounds. */
export function panWindow(
  zoom: { start: number; end: number },
  deltaSteps: number,
  length: number,
): { start: number; end: number } {
  const span = zoom.end - zoom.start;
  const start = Math.min(Math.max(zoom.start + deltaSteps, 0), Math.max(length - 1 - span, 0));
  return { start, end: start + span };
}

export function renderOverview(
  root: HTMLElement,
  bundle: Bundle,
  state: ViewState,
  visible: number[],
  callbacks: OverviewCallbacks,
): void {
  liveRefs.set(root, { state, callbacks });
  let canvas = root.querySelector("canvas");
  if (!canvas) {
    root.classList.add("overview-view");
    canvas = document.createElement("canvas");
    canvas.width = 860;
    canvas.height = 220;
    root.appendChild(canvas);
    const cursor = document.createElement("div");
    cursor.className = "overview-cursor";
    root.appendChild(cursor);
    const notice = document.createElement("div");
    notice.className = "overview-notice";
    root.appendChild(notice);
    let dragOrigin: number | null = null;
    canvas.addEventListener("mousedown", (ev) => (dragOrigin = ev.clientX));
    canvas.addEventListener("mouseup", () => (dragOrigin = null));
    canvas.addEventListener("mousemove", (ev) => {
      const live = liveRefs.get(root);
      if (!live) return;
      const rect = canvas!.getBoundingClientRect();
      const span = live.state.zoom.end - live.state.zoom.start;
      if (dragOrigin !== null && live.callbacks.onPan) {
        const deltaPx = ev.clientX - dragOrigin;
        const deltaSteps = Math.round((-deltaPx / Math.max(rect.width, 1)) * span);
        if (deltaSteps !== 0) {
          dragOrigin = ev.clientX;
          live.callbacks.onPan(deltaSteps);
        }
        return;
      }
      const frac = (ev.clientX - rect.left) / Math.max(rect.width, 1);
      live.callbacks.onHover(Math.round(live.state.zoom.start + frac * span));
    });
    canvas.addEventListener("mouseleave", () => {
      dragOrigin = null;
      liveRefs.get(root)?.callbacks.onHover(null);
    });
  }
  root.dataset.visibleCount = String(visible.length);
  const notice = root.querySelector<HTMLElement>(".overview-notice");
  if (notice) {
    notice.textContent = visible.length === 0 ? "no samples match the current filter" : "";
  }
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const sx = xScale(state.zoom, canvas.width);
  const sy = yScale(canvas.height - 8);
  const gen = line<number>()
    .x((_, i) => sx(i + Math.max(0, Math.floor(state.zoom.start))))
    .y((v) => 4 + sy(v))
    .curve(CURVE_FACTORIES[state.curveStyle])
    .context(ctx);
  ctx.globalAlpha = state.lineOpacity;
  ctx.lineWidth = 1;
  for (const i of drawOrder(bundle.labels, visible, state.precedence)) {
    const lo = Math.max(0, Math.floor(state.zoom.start));
    const hi = Math.min(bundle.series[i].length - 1, Math.ceil(state.zoom.end));
    ctx.beginPath();
    gen(bundle.series[i].slice(lo, hi + 1));
    ctx.strokeStyle = bundle.meta.class_colors[bundle.labels[i]];
    ctx.stroke();
  }
  ctx.globalAlpha = 1;
}

export function placeCursor(root: HTMLElement, state: ViewState, timeStep: number | null): void {
  const cursor = root.querySelector<HTMLElement>(".overview-cursor");
  const canvas = root.querySelector("canvas");
  if (!cursor || !canvas) return;
  if (timeStep === null) {
    cursor.style.display = "none";
    return;
  }
  const sx = xScale(state.zoom, canvas.clientWidth || canvas.width);
  cursor.style.display = "block";
  cursor.style.left = `${sx(timeStep)}px`;
  cursor.dataset.timeStep = String(timeStep);
}
