/** Relationship view: one column per visible signature. Each column shows a
 * centered streamgraph per class (widths straight from the bundle's
 * normalized KDE densities) with the visible samples as dots positioned by
 * their match score. "Show Connections" threads per-sample polylines across
 * the columns (a parallel-coordinate reading); hovering a dot reports the
 * exact score as a percentage with a horizontal reference line. */

import { signatureColor, streamPolygon, yScale } from "../geometry";
import { formatPercent } from "../logic";
import type { Bundle, ViewState } from "../types";

const COL_WIDTH = 84;
const HEIGHT = 300;
const HALF = 26;

export interface RelationshipCallbacks {
  onHoverScore(score: number | null): void;
}

export function renderRelationship(
  root: HTMLElement,
  bundle: Bundle,
  state: ViewState,
  visibleSamplesIdx: number[],
  visibleSignatureIdx: number[],
  callbacks: RelationshipCallbacks,
): void {
  root.innerHTML = "";
  root.classList.add("relationship-view");
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(Math.max(visibleSignatureIdx.length, 1) * COL_WIDTH));
  svg.setAttribute("height", String(HEIGHT + 40));
  const sy = yScale(HEIGHT);

  // connection polylines sit under the dots; opacity adapts to crowd size
  if (state.showConnections && visibleSignatureIdx.length > 1) {
    const lineOpacity = Math.min(1, Math.max(0.04, 8 / Math.max(visibleSamplesIdx.length, 1)));
    for (const i of visibleSamplesIdx) {
      const pts = visibleSignatureIdx
        .map((j, col) => `${col * COL_WIDTH + COL_WIDTH / 2},${20 + sy(bundle.scores[i][j])}`)
        .join(" ");
      const poly = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
      poly.setAttribute("points", pts);
      poly.setAttribute("fill", "none");
      poly.setAttribute("class", "connection-line");
      poly.setAttribute("stroke", bundle.meta.class_colors[bundle.labels[i]]);
      poly.setAttribute("stroke-opacity", String(lineOpacity));
      poly.dataset.sample = String(i);
      svg.appendChild(poly);
    }
  }

  visibleSignatureIdx.forEach((j, col) => {
    const cx = col * COL_WIDTH + COL_WIDTH / 2;
    const group = document.createElementNS("http://www.w3.org/2000/svg", "g");
    group.setAttribute("transform", `translate(0, 20)`);
    group.dataset.sigIndex = String(j);

    const title = document.createElementNS("http://www.w3.org/2000/svg", "text");
    title.setAttribute("x", String(cx));
    title.setAttribute("y", "-6");
    title.setAttribute("text-anchor", "middle");
    title.setAttribute("fill", signatureColor(j));
    title.textContent = `S${bundle.signatures[j].rank}`;
    group.appendChild(title);

    for (const cls of [0, 1] as const) {
      const widths = bundle.kde.widths[j][String(cls)];
      const poly = document.createElementNS("http://www.w3.org/2000/svg", "polygon");
      poly.setAttribute("points", streamPolygon(widths, bundle.kde.grid, cx, HALF, HEIGHT));
      poly.setAttribute("fill", bundle.meta.class_colors[cls]);
      poly.setAttribute("fill-opacity", "0.25");
      poly.setAttribute("class", `stream stream-class-${cls}`);
      group.appendChild(poly);
    }

    for (const i of visibleSamplesIdx) {
      const score = bundle.scores[i][j];
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("cx", String(cx));
      dot.setAttribute("cy", String(sy(score)));
      dot.setAttribute("r", "2");
      dot.setAttribute("fill", bundle.meta.class_colors[bundle.labels[i]]);
      dot.setAttribute("fill-opacity", String(state.lineOpacity));
      dot.setAttribute("class", "score-dot");
      dot.dataset.sample = String(i);
      dot.dataset.sigIndex = String(j);
      dot.dataset.score = String(score);
      dot.addEventListener("mouseenter", () => callbacks.onHoverScore(score));
      dot.addEventListener("mouseleave", () => callbacks.onHoverScore(null));
      group.appendChild(dot);
    }
    svg.appendChild(group);
  });

  root.appendChild(svg);
  const tooltip = document.createElement("div");
  tooltip.className = "score-tooltip";
  tooltip.style.display = "none";
  root.appendChild(tooltip);
}

/** Show the hover readout: exact percentage plus a reference line. */
export function showScoreReadout(root: HTMLElement, score: number | null): void {
  const tooltip = root.querySelector<HTMLElement>(".score-tooltip");
  const svg = root.querySelector("svg");
  if (!tooltip || !svg) return;
  svg.querySelector(".reference-line")?.remove();
  if (score === null) {
    tooltip.style.display = "none";
    return;
  }
  tooltip.style.display = "block";
  tooltip.textContent = formatPercent(score);
  tooltip.dataset.score = String(score);
  const sy = yScale(HEIGHT);
  const lineEl = document.createElementNS("http://www.w3.org/2000/svg", "line");
  lineEl.setAttribute("class", "reference-line");
  lineEl.setAttribute("x1", "0");
  lineEl.setAttribute("x2", svg.getAttribute("width") ?? "0");
  lineEl.setAttribute("y1", String(20 + sy(score)));
  lineEl.setAttribute("y2", String(20 + sy(score)));
  lineEl.setAttribute("stroke", "#555");
  lineEl.setAttribute("stroke-dasharray", "3,2");
  svg.appendChild(lineEl);
  tooltip.style.top = `${20 + sy(score)}px`;
}
