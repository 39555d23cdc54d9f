/** In-situ alignment view: the selected sample's full series with every
 * signature scoring at or above the threshold overlaid at its best-match
 * offset, in the signature's color, score percentage annotated beneath.
 * Stronger matches render more opaque. Follows the overview zoom when the
 * follow-zoom toggle is on. */

import { seriesPath, signatureColor, xScale, yScale } from "../geometry";
import { formatPercent } from "../logic";
import type { Bundle, ViewState } from "../types";

const WIDTH = 860;
const HEIGHT = 200;

export function renderSampleDetail(
  root: HTMLElement,
  bundle: Bundle,
  state: ViewState,
  visibleSignatureIdx: number[],
): void {
  root.innerHTML = "";
  root.classList.add("sample-detail-view");
  if (state.selectedSample === null) {
    const notice = document.createElement("div");
    notice.className = "detail-notice";
    notice.textContent = "select a row in the matrix view to inspect a sample";
    root.appendChild(notice);
    return;
  }
  const i = state.selectedSample;
  const series = bundle.series[i];
  const domain = state.followZoom
    ? state.zoom
    : { start: 0, end: series.length - 1 };
  const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(HEIGHT + 30));
  svg.dataset.sample = String(i);

  const base = document.createElementNS("http://www.w3.org/2000/svg", "path");
  base.setAttribute("d", seriesPath(series, state.curveStyle, domain, WIDTH, HEIGHT));
  base.setAttribute("fill", "none");
  base.setAttribute("stroke", bundle.meta.class_colors[bundle.labels[i]]);
  base.setAttribute("class", "detail-series");
  svg.appendChild(base);

  const sx = xScale(domain, WIDTH);
  const sy = yScale(HEIGHT);
  let overlays = 0;
  for (const j of visibleSignatureIdx) {
    const score = bundle.scores[i][j];
    if (score < state.threshold) continue;
    overlays++;
    const offset = bundle.best_offsets[i][j];
    const values = bundle.signatures[j].values;
    const pts = values
      .map((v, t) => `${sx(offset + t)},${sy(v)}`)
      .join(" ");
    const poly = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    poly.setAttribute("points", pts);
    poly.setAttribute("fill", "none");
    poly.setAttribute("stroke", signatureColor(j));
    poly.setAttribute("stroke-width", "2.5");
    // stronger matches draw more opaque
    poly.setAttribute("stroke-opacity", String(0.35 + 0.65 * score));
    poly.setAttribute("class", "detail-overlay");
    poly.dataset.sigIndex = String(j);
    poly.dataset.offset = String(offset);
    poly.dataset.score = String(score);
    svg.appendChild(poly);

    const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
    label.setAttribute("x", String(sx(offset)));
    label.setAttribute("y", String(HEIGHT + 14 + 12 * (overlays % 2)));
    label.setAttribute("fill", signatureColor(j));
    label.setAttribute("class", "detail-score-label");
    label.dataset.sigIndex = String(j);
    label.dataset.score = String(score);
    label.textContent = `S${bundle.signatures[j].rank} ${formatPercent(score)}`;
    svg.appendChild(label);
  }
  root.appendChild(svg);
  if (overlays === 0) {
    const notice = document.createElement("div");
    notice.className = "detail-notice";
    notice.textContent = "no signature scores above the threshold for this sample";
    root.appendChild(notice);
  }
}
