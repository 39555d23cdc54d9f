/** Matrix view: one row per visible sample with id, cluster, class, and one
 * score bar per signature (bar length linear in the score; zero score means
 * zero width). Header clicks cycle the four orderings; row clicks select the
 * sample for the detail panel. */

import { signatureColor } from "../geometry";
import { MatrixRow, sortRows } from "../logic";
import type { Bundle, MatrixSortKey, ViewState } from "../types";

const BAR_WIDTH = 56;

export interface MatrixCallbacks {
  onSort(key: MatrixSortKey): void;
  onSelect(sample: number): void;
}

export function renderMatrix(
  root: HTMLElement,
  bundle: Bundle,
  state: ViewState,
  rows: MatrixRow[],
  visibleSignatureIdx: number[],
  callbacks: MatrixCallbacks,
): void {
  root.innerHTML = "";
  root.classList.add("matrix-view");
  const table = document.createElement("div");
  table.className = "matrix-table";

  const header = document.createElement("div");
  header.className = "matrix-header matrix-row";
  for (const [label, key] of [
    ["id", { kind: "id" }],
    ["cluster", { kind: "cluster" }],
    ["class", { kind: "class" }],
  ] as [string, MatrixSortKey][]) {
    const cell = document.createElement("span");
    cell.className = "matrix-cell matrix-sort";
    cell.textContent = label;
    cell.dataset.sortKind = key.kind;
    cell.addEventListener("click", () => callbacks.onSort(key));
    header.appendChild(cell);
  }
  for (const j of visibleSignatureIdx) {
    const cell = document.createElement("span");
    cell.className = "matrix-cell matrix-sort";
    cell.style.color = signatureColor(j);
    cell.textContent = `S${bundle.signatures[j].rank}`;
    cell.dataset.sortKind = "signature";
    cell.dataset.sigIndex = String(j);
    cell.addEventListener("click", () => callbacks.onSort({ kind: "signature", index: j }));
    header.appendChild(cell);
  }
  table.appendChild(header);

  const ordered = sortRows(rows, state.matrixSort);
  for (const row of ordered) {
    const el = document.createElement("div");
    el.className = "matrix-row";
    el.dataset.sample = String(row.sample);
    el.dataset.cluster = row.cluster === null ? "" : String(row.cluster);
    el.dataset.label = String(row.label);
    if (state.selectedSample === row.sample) el.classList.add("selected");

    const id = document.createElement("span");
    id.className = "matrix-cell";
    id.textContent = `#${row.sample}`;
    el.appendChild(id);

    const cluster = document.createElement("span");
    cluster.className = "matrix-cell";
    cluster.textContent = row.cluster === null
      ? "-"
      : `S${bundle.signatures[row.cluster].rank}`;
    if (row.cluster !== null) cluster.style.color = signatureColor(row.cluster);
    el.appendChild(cluster);

    const cls = document.createElement("span");
    cls.className = "matrix-cell matrix-class";
    cls.textContent = bundle.meta.class_names[row.label];
    cls.style.color = bundle.meta.class_colors[row.label];
    el.appendChild(cls);

    for (const j of visibleSignatureIdx) {
      const score = row.scores[j];
      const cell = document.createElement("span");
      cell.className = "matrix-cell matrix-bar-cell";
      const bar = document.createElement("span");
      bar.className = "matrix-bar";
      bar.style.width = `${score * BAR_WIDTH}px`;
      bar.style.background = signatureColor(j);
      bar.dataset.score = String(score);
      bar.dataset.sample = String(row.sample);
      bar.dataset.sigIndex = String(j);
      cell.appendChild(bar);
      el.appendChild(cell);
    }
    el.addEventListener("click", () => callbacks.onSelect(row.sample));
    table.appendChild(el);
  }
  root.appendChild(table);
}
