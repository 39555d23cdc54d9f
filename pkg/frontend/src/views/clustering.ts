/** Signature-based clustering view: one chip per signature with its member
 * count at the current threshold and a class-ratio mini-bar. Chips act as
 * filters (union/intersection with the signature list selection). */

import { classCounts, clusterMembers } from "../logic";
import { signatureColor } from "../geometry";
import type { Bundle, ViewState } from "../types";

export interface ClusteringCallbacks {
  onToggle(index: number): void;
}

export function renderClustering(
  root: HTMLElement,
  bundle: Bundle,
  state: ViewState,
  callbacks: ClusteringCallbacks,
): void {
  root.innerHTML = "";
  root.classList.add("clustering-view");
  bundle.signatures.forEach((sig, j) => {
    const members = clusterMembers(bundle, j, state.threshold);
    const [c0, c1] = classCounts(bundle, members);
    const chip = document.createElement("div");
    chip.className = "cluster-chip";
    chip.dataset.sigIndex = String(j);
    chip.dataset.count = String(members.length);
    chip.dataset.class0 = String(c0);
    chip.dataset.class1 = String(c1);
    if (state.selectedSignatures.includes(j)) chip.classList.add("selected");

    const swatch = document.createElement("span");
    swatch.className = "chip-swatch";
    swatch.style.background = signatureColor(j);
    chip.appendChild(swatch);

    const name = document.createElement("span");
    name.className = "chip-name";
    name.textContent = `S${sig.rank}`;
    chip.appendChild(name);

    const count = document.createElement("span");
    count.className = "chip-count";
    count.textContent = String(members.length);
    chip.appendChild(count);

    const ratio = document.createElement("span");
    ratio.className = "chip-ratio";
    const total = Math.max(members.length, 1);
    for (const [cls, n] of [[0, c0], [1, c1]] as const) {
      const part = document.createElement("span");
      part.className = "chip-ratio-part";
      part.style.width = `${(n / total) * 48}px`;
      part.style.background = bundle.meta.class_colors[cls];
      ratio.appendChild(part);
    }
    chip.appendChild(ratio);

    chip.addEventListener("click", () => callbacks.onToggle(j));
    root.appendChild(chip);
  });
}
