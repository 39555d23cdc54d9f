/** Ranked signature cards: shape thumbnail in the signature's categorical
 * color at its original length, IG readout, click-to-select. Selection here
 * and in the clustering view share the same state. */

import { polylinePoints, signatureColor } from "../geometry";
import type { Bundle, ViewState } from "../types";

const THUMB_HEIGHT = 36;

export interface SignatureListCallbacks {
  onToggle(index: number): void;
}

export function renderSignatureList(
  root: HTMLElement,
  bundle: Bundle,
  state: ViewState,
  matchCounts: number[] | null,
  callbacks: SignatureListCallbacks,
): void {
  root.innerHTML = "";
  root.classList.add("signature-list");
  // default order is by importance rank; match-count order is opt-in
  const order = bundle.signatures.map((_, j) => j);
  if (matchCounts && state.signatureListOrder === "matches") {
    order.sort((a, b) => matchCounts[b] - matchCounts[a] || a - b);
  }
  for (const j of order) {
    const sig = bundle.signatures[j];
    if (!sig.display && !state.selectedSignatures.includes(j)) continue;
    const card = document.createElement("div");
    card.className = "signature-card";
    card.dataset.sigIndex = String(j);
    card.dataset.ig = String(sig.ig);
    if (state.selectedSignatures.includes(j)) card.classList.add("selected");

    const label = document.createElement("div");
    label.className = "signature-name";
    label.textContent = `S${sig.rank}`;
    label.style.color = signatureColor(j);
    card.appendChild(label);

    const svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    // original form: width follows the signature's own length
    svg.setAttribute("width", String(Math.max(sig.values.length * 3, 24)));
    svg.setAttribute("height", String(THUMB_HEIGHT));
    const poly = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
    poly.setAttribute("points", polylinePoints(sig.values, 0, 3, THUMB_HEIGHT));
    poly.setAttribute("fill", "none");
    poly.setAttribute("stroke", signatureColor(j));
    poly.setAttribute("stroke-width", "1.5");
    svg.appendChild(poly);
    card.appendChild(svg);

    const ig = document.createElement("div");
    ig.className = "signature-ig";
    ig.textContent = `IG ${sig.ig.toFixed(3)}`;
    card.appendChild(ig);

    if (matchCounts) {
      const count = document.createElement("div");
      count.className = "signature-count";
      count.dataset.count = String(matchCounts[j]);
      count.textContent = `${matchCounts[j]} matches`;
      card.appendChild(count);
    }

    card.addEventListener("click", () => callbacks.onToggle(j));
    root.appendChild(card);
  }
}
