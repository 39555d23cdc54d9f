/** Application wiring: load the bundle, hold one ViewState, and keep the
 * three panels coordinated. Data-affecting interactions re-render
 * immediately; global style changes (curve, opacity, precedence) funnel
 * through a 500 ms throttle. */

import { ClusterClient, loadBundle } from "./api";
import { matchCounts, matrixRows, visibleSamples, visibleSignatures } from "./logic";
import { throttle } from "./throttle";
import type { Bundle, MatrixSortKey, ViewState } from "./types";
import { defaultState, validateState } from "./types";
import { renderClustering } from "./views/clustering";
import { panWindow, placeCursor, renderOverview } from "./views/overview";
import { renderRelationship, showScoreReadout } from "./views/relationship";
import { renderMatrix } from "./views/matrix";
import { renderSampleDetail } from "./views/sampleDetail";
import { renderSignatureList } from "./views/signatureList";

type Tab = "relationship" | "matrix";

export class App {
  state: ViewState;
  tab: Tab = "relationship";
  private clusters: ClusterClient;
  private styleRender: () => void;

  constructor(private bundle: Bundle, private root: HTMLElement) {
    this.state = defaultState(bundle);
    this.clusters = new ClusterClient(bundle);
    this.styleRender = throttle(() => this.renderAll(), 500);
    this.buildLayout();
    this.renderAll();
  }

  /** Data-path updates: filters, threshold, selection, sorting, tabs. */
  update(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    validateState(this.state);
    this.renderAll();
    if (partial.threshold !== undefined) {
      // derived cluster labels come from the service (stale replies dropped)
      void this.clusters.at(this.state.threshold, () => this.renderAll());
    }
  }

  /** Style-path updates: curve, opacity, precedence (throttled). */
  updateStyle(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    validateState(this.state);
    this.styleRender();
  }

  toggleSignature(j: number): void {
    const selected = this.state.selectedSignatures.includes(j)
      ? this.state.selectedSignatures.filter((x) => x !== j)
      : [...this.state.selectedSignatures, j].sort((a, b) => a - b);
    this.update({ selectedSignatures: selected });
  }

  setTab(tab: Tab): void {
    this.tab = tab;
    this.renderAll();
  }

  renderAll(): void {
    const bundle = this.bundle;
    const state = this.state;
    const visible = visibleSamples(bundle, state);
    const sigIdx = visibleSignatures(bundle, state);
    const counts = matchCounts(bundle, visible, state.threshold);

    renderOverview(this.el("overview"), bundle, state, visible, {
      onHover: (t) => placeCursor(this.el("overview"), this.state, t),
      onPan: (delta) => this.update({
        zoom: panWindow(this.state.zoom, delta, bundle.meta.length),
      }),
    });
    renderSignatureList(this.el("signature-list"), bundle, state, counts, {
      onToggle: (j) => this.toggleSignature(j),
    });
    renderClustering(this.el("clustering"), bundle, state, {
      onToggle: (j) => this.toggleSignature(j),
    });

    const relationshipEl = this.el("relationship");
    const matrixEl = this.el("matrix");
    relationshipEl.style.display = this.tab === "relationship" ? "" : "none";
    matrixEl.style.display = this.tab === "matrix" ? "" : "none";
    if (this.tab === "relationship") {
      renderRelationship(relationshipEl, bundle, state, visible, sigIdx, {
        onHoverScore: (s) => showScoreReadout(relationshipEl, s),
      });
    } else {
      renderMatrix(matrixEl, bundle, state, matrixRows(bundle, visible), sigIdx, {
        onSort: (key: MatrixSortKey) => this.update({ matrixSort: key }),
        onSelect: (sample) => this.update({ selectedSample: sample }),
      });
    }
    renderSampleDetail(this.el("sample-detail"), bundle, state, sigIdx);
  }

  private el(id: string): HTMLElement {
    const found = this.root.querySelector<HTMLElement>(`#${id}`);
    if (!found) throw new Error(`missing panel #${id}`);
    return found;
  }

  private buildLayout(): void {
    this.root.innerHTML = `
      <header class="toolbar">
        <strong>${this.bundle.meta.name}</strong>
        <label>curve
          <select id="curve-style">
            <option value="linear">linear</option>
            <option value="step">step</option>
            <option value="basis">basis spline</option>
          </select>
        </label>
        <label>opacity
          <input id="opacity" type="range" min="0.05" max="1" step="0.05" value="${this.state.lineOpacity}">
        </label>
        <label>zoom
          <input id="zoom" type="range" min="1" max="100" step="1" value="100">
        </label>
        <label>draw last
          <select id="precedence">
            <option value="1">${this.bundle.meta.class_names[1]}</option>
            <option value="0">${this.bundle.meta.class_names[0]}</option>
          </select>
        </label>
        <label>threshold
          <input id="threshold" type="range" min="0" max="1" step="0.01" value="${this.state.threshold}">
          <span id="threshold-value">${this.state.threshold.toFixed(2)}</span>
        </label>
        <label>list order
          <select id="list-order">
            <option value="rank">importance</option>
            <option value="matches">matches</option>
          </select>
        </label>
        <label><input id="filter-mode" type="checkbox"> intersection</label>
        <label><input id="follow-zoom" type="checkbox"> follow zoom</label>
        <label><input id="show-connections" type="checkbox"> show connections</label>
        <label><input id="filter-similar" type="checkbox"> filter out similar</label>
        <nav>
          <button id="tab-relationship" class="active">relationship</button>
          <button id="tab-matrix">matrix</button>
        </nav>
      </header>
      <section class="panel" id="overview-panel">
        <h3>Overview</h3>
        <div id="overview"></div>
        <div id="signature-list"></div>
        <div id="clustering"></div>
      </section>
      <section class="panel" id="signature-panel">
        <h3>Signatures</h3>
        <div id="relationship"></div>
        <div id="matrix"></div>
      </section>
      <section class="panel" id="sample-panel">
        <h3>Sample</h3>
        <div id="sample-detail"></div>
      </section>`;
    this.wireControls();
  }

  private wireControls(): void {
    const q = <T extends HTMLElement>(sel: string) =>
      this.root.querySelector<T>(sel)!;
    q<HTMLSelectElement>("#curve-style").addEventListener("change", (e) => {
      this.updateStyle({ curveStyle: (e.target as HTMLSelectElement).value as ViewState["curveStyle"] });
    });
    q<HTMLInputElement>("#opacity").addEventListener("input", (e) => {
      this.updateStyle({ lineOpacity: Number((e.target as HTMLInputElement).value) });
    });
    q<HTMLSelectElement>("#precedence").addEventListener("change", (e) => {
      this.updateStyle({ precedence: Number((e.target as HTMLSelectElement).value) as 0 | 1 });
    });
    q<HTMLInputElement>("#zoom").addEventListener("input", (e) => {
      const pct = Number((e.target as HTMLInputElement).value);
      const m = this.bundle.meta.length;
      const span = Math.max(2, Math.round((m - 1) * (pct / 100)));
      const start = Math.min(this.state.zoom.start, m - 1 - span);
      this.update({ zoom: { start: Math.max(0, start), end: Math.max(0, start) + span } });
    });
    q<HTMLInputElement>("#threshold").addEventListener("input", (e) => {
      const t = Number((e.target as HTMLInputElement).value);
      q("#threshold-value").textContent = t.toFixed(2);
      this.update({ threshold: t });
    });
    q<HTMLSelectElement>("#list-order").addEventListener("change", (e) => {
      this.update({
        signatureListOrder: (e.target as HTMLSelectElement).value as "rank" | "matches",
      });
    });
    q<HTMLInputElement>("#filter-mode").addEventListener("change", (e) => {
      this.update({ filterMode: (e.target as HTMLInputElement).checked ? "intersection" : "union" });
    });
    q<HTMLInputElement>("#follow-zoom").addEventListener("change", (e) => {
      this.update({ followZoom: (e.target as HTMLInputElement).checked });
    });
    q<HTMLInputElement>("#show-connections").addEventListener("change", (e) => {
      this.update({ showConnections: (e.target as HTMLInputElement).checked });
    });
    q<HTMLInputElement>("#filter-similar").addEventListener("change", (e) => {
      this.update({ filterSimilar: (e.target as HTMLInputElement).checked });
    });
    q("#tab-relationship").addEventListener("click", () => {
      q("#tab-relationship").classList.add("active");
      q("#tab-matrix").classList.remove("active");
      this.setTab("relationship");
    });
    q("#tab-matrix").addEventListener("click", () => {
      q("#tab-matrix").classList.add("active");
      q("#tab-relationship").classList.remove("active");
      this.setTab("matrix");
    });
  }
}

async function start(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  try {
    const bundle = await loadBundle();
    new App(bundle, root);
  } catch (err) {
    root.textContent = String(err);
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  void start();
}
