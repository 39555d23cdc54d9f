/** Component tests against the fixture bundle: every number a view shows is
 * asserted equal to the bundle value it came from. */

import { beforeEach, describe, expect, it } from "vitest";

import fixtureJson from "./fixture/bundle.json";
import { streamPolygon } from "../src/geometry";
import { matrixRows, visibleSamples, visibleSignatures } from "../src/logic";
import type { Bundle } from "../src/types";
import { defaultState } from "../src/types";
import { renderClustering } from "../src/views/clustering";
import { renderMatrix } from "../src/views/matrix";
import { renderRelationship, showScoreReadout } from "../src/views/relationship";
import { renderSampleDetail } from "../src/views/sampleDetail";
import { renderSignatureList } from "../src/views/signatureList";

const bundle = fixtureJson as unknown as Bundle;

function container(): HTMLElement {
  const el = document.createElement("div");
  document.body.appendChild(el);
  return el;
}

beforeEach(() => {
  document.body.innerHTML = "";
});

describe("matrix view", () => {
  function renderedBars(root: HTMLElement): HTMLElement[] {
    return Array.from(root.querySelectorAll<HTMLElement>(".matrix-bar"));
  }

  it("shows one row per visible sample with exact bundle scores", () => {
    const root = container();
    const state = defaultState(bundle);
    const visible = visibleSamples(bundle, state);
    renderMatrix(root, bundle, state, matrixRows(bundle, visible),
      visibleSignatures(bundle, state), { onSort: () => {}, onSelect: () => {} });
    const rows = root.querySelectorAll(".matrix-row:not(.matrix-header)");
    expect(rows).toHaveLength(bundle.meta.n_samples);
    for (const bar of renderedBars(root)) {
      const i = Number(bar.dataset.sample);
      const j = Number(bar.dataset.sigIndex);
      expect(Number(bar.dataset.score)).toBe(bundle.scores[i][j]);
      // linear bar encoding: width proportional to the score, zero at zero
      expect(bar.style.width).toBe(`${bundle.scores[i][j] * 56}px`);
    }
  });

  it("shows the bundle's cluster and class per row", () => {
    const root = container();
    const state = defaultState(bundle);
    const visible = visibleSamples(bundle, state);
    renderMatrix(root, bundle, state, matrixRows(bundle, visible),
      visibleSignatures(bundle, state), { onSort: () => {}, onSelect: () => {} });
    root.querySelectorAll<HTMLElement>(".matrix-row:not(.matrix-header)").forEach((row) => {
      const i = Number(row.dataset.sample);
      const expected = bundle.clusters[i].cluster;
      expect(row.dataset.cluster).toBe(expected === null ? "" : String(expected));
      expect(Number(row.dataset.label)).toBe(bundle.labels[i]);
    });
  });

  it("sorting by a signature renders rows in non-increasing score order", () => {
    const root = container();
    const state = defaultState(bundle);
    state.matrixSort = { kind: "signature", index: 2 };
    const visible = visibleSamples(bundle, state);
    renderMatrix(root, bundle, state, matrixRows(bundle, visible),
      visibleSignatures(bundle, state), { onSort: () => {}, onSelect: () => {} });
    const scores = Array.from(
      root.querySelectorAll<HTMLElement>(".matrix-row:not(.matrix-header)"),
    ).map((row) => bundle.scores[Number(row.dataset.sample)][2]);
    for (let i = 1; i < scores.length; i++) {
      expect(scores[i]).toBeLessThanOrEqual(scores[i - 1]);
    }
  });

  it("raising the threshold never adds rows", () => {
    const root = container();
    const state = defaultState(bundle);
    state.selectedSignatures = [0, 1];
    let previous: Set<string> | null = null;
    for (const t of [0.2, 0.5, 0.8]) {
      state.threshold = t;
      const visible = visibleSamples(bundle, state);
      renderMatrix(root, bundle, state, matrixRows(bundle, visible),
        visibleSignatures(bundle, state), { onSort: () => {}, onSelect: () => {} });
      const now = new Set(Array.from(
        root.querySelectorAll<HTMLElement>(".matrix-row:not(.matrix-header)"),
      ).map((r) => r.dataset.sample!));
      if (previous !== null) {
        for (const id of now) expect(previous.has(id)).toBe(true);
      }
      previous = now;
    }
  });

  it("row click selects the sample", () => {
    const root = container();
    const state = defaultState(bundle);
    const selected: number[] = [];
    renderMatrix(root, bundle, state,
      matrixRows(bundle, visibleSamples(bundle, state)),
      visibleSignatures(bundle, state),
      { onSort: () => {}, onSelect: (s) => selected.push(s) });
    const row = root.querySelector<HTMLElement>(".matrix-row:not(.matrix-header)")!;
    row.click();
    expect(selected).toEqual([Number(row.dataset.sample)]);
  });
});

describe("relationship view", () => {
  it("dots carry exact bundle scores for every visible sample and signature", () => {
    const root = container();
    const state = defaultState(bundle);
    const visible = visibleSamples(bundle, state);
    const sigIdx = visibleSignatures(bundle, state);
    renderRelationship(root, bundle, state, visible, sigIdx, { onHoverScore: () => {} });
    const dots = root.querySelectorAll<SVGCircleElement>(".score-dot");
    expect(dots).toHaveLength(visible.length * sigIdx.length);
    dots.forEach((dot) => {
      const i = Number(dot.dataset.sample);
      const j = Number(dot.dataset.sigIndex);
      expect(Number(dot.dataset.score)).toBe(bundle.scores[i][j]);
    });
  });

  it("streamgraph outlines are built from the bundle's normalized widths", () => {
    const root = container();
    const state = defaultState(bundle);
    renderRelationship(root, bundle, state, visibleSamples(bundle, state),
      visibleSignatures(bundle, state), { onHoverScore: () => {} });
    const first = root.querySelector<SVGPolygonElement>("g[data-sig-index='0'] .stream-class-0")!;
    const expected = streamPolygon(bundle.kde.widths[0]["0"], bundle.kde.grid, 42, 26, 300);
    expect(first.getAttribute("points")).toBe(expected);
  });

  it("show-connections draws one polyline per visible sample", () => {
    const root = container();
    const state = defaultState(bundle);
    state.showConnections = true;
    const visible = visibleSamples(bundle, state);
    renderRelationship(root, bundle, state, visible,
      visibleSignatures(bundle, state), { onHoverScore: () => {} });
    expect(root.querySelectorAll(".connection-line")).toHaveLength(visible.length);
  });

  it("hover readout shows the score as a percentage with a reference line", () => {
    const root = container();
    const state = defaultState(bundle);
    renderRelationship(root, bundle, state, visibleSamples(bundle, state),
      visibleSignatures(bundle, state), { onHoverScore: () => {} });
    showScoreReadout(root, 0.73);
    const tooltip = root.querySelector<HTMLElement>(".score-tooltip")!;
    expect(tooltip.textContent).toBe("73%");
    expect(root.querySelector(".reference-line")).not.toBeNull();
    showScoreReadout(root, null);
    expect(tooltip.style.display).toBe("none");
    expect(root.querySelector(".reference-line")).toBeNull();
  });

  it("filtered signatures disappear from the columns", () => {
    const root = container();
    const doctored: Bundle = JSON.parse(JSON.stringify(bundle));
    doctored.dtw[2][0] = 0;
    doctored.dtw[0][2] = 0;
    const state = defaultState(doctored);
    state.filterSimilar = true;
    state.similarityCutoff = 0;
    const sigIdx = visibleSignatures(doctored, state);
    renderRelationship(root, doctored, state, visibleSamples(doctored, state),
      sigIdx, { onHoverScore: () => {} });
    const shown = Array.from(root.querySelectorAll<SVGGElement>("g[data-sig-index]"))
      .map((g) => Number(g.dataset.sigIndex));
    expect(shown).not.toContain(2);
    expect(shown).toContain(0);
  });
});

describe("sample detail view", () => {
  it("overlays every above-threshold signature at its bundle offset", () => {
    const root = container();
    const state = defaultState(bundle);
    state.selectedSample = 3;
    state.threshold = 0.4;
    renderSampleDetail(root, bundle, state, visibleSignatures(bundle, state));
    const overlays = root.querySelectorAll<SVGPolylineElement>(".detail-overlay");
    const expected = bundle.scores[3].filter((s) => s >= 0.4).length;
    expect(overlays).toHaveLength(expected);
    overlays.forEach((poly) => {
      const j = Number(poly.dataset.sigIndex);
      expect(Number(poly.dataset.offset)).toBe(bundle.best_offsets[3][j]);
      expect(Number(poly.dataset.score)).toBe(bundle.scores[3][j]);
      expect(Number(poly.dataset.score)).toBeGreaterThanOrEqual(0.4);
    });
    const labels = root.querySelectorAll<SVGTextElement>(".detail-score-label");
    labels.forEach((label) => {
      const j = Number(label.dataset.sigIndex);
      const pct = `${Math.round(bundle.scores[3][j] * 100)}%`;
      expect(label.textContent).toContain(pct);
    });
  });

  it("higher scores render more opaque", () => {
    const root = container();
    const state = defaultState(bundle);
    state.selectedSample = 0;
    state.threshold = 0;
    renderSampleDetail(root, bundle, state, visibleSignatures(bundle, state));
    const overlays = Array.from(root.querySelectorAll<SVGPolylineElement>(".detail-overlay"));
    const sorted = [...overlays].sort(
      (a, b) => Number(a.dataset.score) - Number(b.dataset.score));
    for (let i = 1; i < sorted.length; i++) {
      expect(Number(sorted[i].getAttribute("stroke-opacity")))
        .toBeGreaterThanOrEqual(Number(sorted[i - 1].getAttribute("stroke-opacity")));
    }
  });

  it("threshold above every score leaves the bare series with a notice", () => {
    const root = container();
    const state = defaultState(bundle);
    state.selectedSample = 0;
    state.threshold = 1.0;
    const max = Math.max(...bundle.scores[0]);
    renderSampleDetail(root, bundle, state, visibleSignatures(bundle, state));
    if (max < 1.0) {
      expect(root.querySelectorAll(".detail-overlay")).toHaveLength(0);
      expect(root.querySelector(".detail-notice")).not.toBeNull();
    }
    expect(root.querySelector(".detail-series")).not.toBeNull();
  });

  it("no selection shows a prompt instead of a chart", () => {
    const root = container();
    renderSampleDetail(root, bundle, defaultState(bundle),
      visibleSignatures(bundle, defaultState(bundle)));
    expect(root.querySelector("svg")).toBeNull();
    expect(root.querySelector(".detail-notice")).not.toBeNull();
  });
});

describe("clustering and signature list", () => {
  it("chips report exact member and class counts at the threshold", () => {
    const root = container();
    const state = defaultState(bundle);
    renderClustering(root, bundle, state, { onToggle: () => {} });
    root.querySelectorAll<HTMLElement>(".cluster-chip").forEach((chip) => {
      const j = Number(chip.dataset.sigIndex);
      const members = bundle.scores.filter((row) => row[j] >= state.threshold);
      expect(Number(chip.dataset.count)).toBe(members.length);
      const c1 = bundle.scores
        .map((row, i) => (row[j] >= state.threshold ? bundle.labels[i] : -1))
        .filter((l) => l === 1).length;
      expect(Number(chip.dataset.class1)).toBe(c1);
      expect(Number(chip.dataset.class0)).toBe(members.length - c1);
    });
  });

  it("chip click toggles the shared signature selection", () => {
    const root = container();
    const toggled: number[] = [];
    renderClustering(root, bundle, defaultState(bundle), {
      onToggle: (j) => toggled.push(j),
    });
    root.querySelector<HTMLElement>(".cluster-chip[data-sig-index='1']")!.click();
    expect(toggled).toEqual([1]);
  });

  it("signature cards show exact information gain, ranked order", () => {
    const root = container();
    renderSignatureList(root, bundle, defaultState(bundle), null, { onToggle: () => {} });
    const cards = Array.from(root.querySelectorAll<HTMLElement>(".signature-card"));
    expect(cards.length).toBeGreaterThan(0);
    cards.forEach((card) => {
      const j = Number(card.dataset.sigIndex);
      expect(Number(card.dataset.ig)).toBe(bundle.signatures[j].ig);
    });
    const igs = cards.map((c) => Number(c.dataset.ig));
    for (let i = 1; i < igs.length; i++) {
      expect(igs[i]).toBeLessThanOrEqual(igs[i - 1]);
    }
  });

  it("stays in importance order by default even with counts shown", () => {
    const root = container();
    const counts = bundle.signatures.map((_, j) =>
      bundle.scores.filter((row) => row[j] >= 0.5).length);
    renderSignatureList(root, bundle, defaultState(bundle), counts, { onToggle: () => {} });
    const igs = Array.from(root.querySelectorAll<HTMLElement>(".signature-card"))
      .map((c) => Number(c.dataset.ig));
    for (let i = 1; i < igs.length; i++) {
      expect(igs[i]).toBeLessThanOrEqual(igs[i - 1]);
    }
  });

  it("reordering by match count sorts cards by the count when requested", () => {
    const root = container();
    const counts = bundle.signatures.map((_, j) =>
      bundle.scores.filter((row) => row[j] >= 0.5).length);
    const state = defaultState(bundle);
    state.signatureListOrder = "matches";
    renderSignatureList(root, bundle, state, counts, { onToggle: () => {} });
    const shown = Array.from(root.querySelectorAll<HTMLElement>(".signature-count"))
      .map((el) => Number(el.dataset.count));
    for (let i = 1; i < shown.length; i++) {
      expect(shown[i]).toBeLessThanOrEqual(shown[i - 1]);
    }
  });

  it("pan clamps the zoom window to the series bounds", async () => {
    const { panWindow } = await import("../src/views/overview");
    expect(panWindow({ start: 0, end: 10 }, 5, 40)).toEqual({ start: 5, end: 15 });
    expect(panWindow({ start: 0, end: 10 }, -5, 40)).toEqual({ start: 0, end: 10 });
    expect(panWindow({ start: 25, end: 35 }, 100, 40)).toEqual({ start: 29, end: 39 });
    const full = panWindow({ start: 0, end: 39 }, 7, 40);
    expect(full).toEqual({ start: 0, end: 39 });
  });
});

describe("overview helpers", () => {
  it("render precedence only reorders drawing, never the visible set", async () => {
    const { drawOrder } = await import("../src/geometry");
    const labels = bundle.labels;
    const byClass = (cls: number) =>
      labels.map((l, i) => (l === cls ? i : -1)).filter((i) => i >= 0).slice(0, 3);
    const visible = [...byClass(0), ...byClass(1)];
    for (const precedence of [0, 1] as const) {
      const order = drawOrder(labels, visible, precedence);
      expect([...order].sort((a, b) => a - b)).toEqual([...visible].sort((a, b) => a - b));
      // the preferred class occupies the tail of the paint order
      const firstPreferred = order.findIndex((i) => labels[i] === precedence);
      expect(order.slice(firstPreferred).every((i) => labels[i] === precedence)).toBe(true);
    }
  });

  it("empty filter result shows a notice and zero series", async () => {
    const { renderOverview } = await import("../src/views/overview");
    const root = container();
    const state = defaultState(bundle);
    renderOverview(root, bundle, state, [], { onHover: () => {} });
    expect(root.dataset.visibleCount).toBe("0");
    expect(root.querySelector(".overview-notice")!.textContent).not.toBe("");
  });
});

describe("follow zoom", () => {
  it("detail view adopts the overview window when follow-zoom is on", () => {
    const root = container();
    const state = defaultState(bundle);
    state.selectedSample = 0;
    state.threshold = 1; // keep overlays out of the way
    state.followZoom = true;
    state.zoom = { start: 10, end: 20 };
    renderSampleDetail(root, bundle, state, visibleSignatures(bundle, state));
    const svg = root.querySelector("svg")!;
    expect(svg.dataset.sample).toBe("0");
    // zoomed domain: the base path only spans the zoom window's slice
    const d = root.querySelector<SVGPathElement>(".detail-series")!.getAttribute("d")!;
    const segments = d.split("L").length;
    expect(segments).toBeLessThanOrEqual(12); // 11 points in [10, 20]
  });
});

describe("style/data separation", () => {
  it("style changes never alter a displayed numeric value", () => {
    const root = container();
    const state = defaultState(bundle);
    const visible = visibleSamples(bundle, state);
    const sigIdx = visibleSignatures(bundle, state);
    renderRelationship(root, bundle, state, visible, sigIdx, { onHoverScore: () => {} });
    const before = Array.from(root.querySelectorAll<SVGCircleElement>(".score-dot"))
      .map((d) => [d.dataset.sample, d.dataset.sigIndex, d.dataset.score].join(":"));
    state.curveStyle = "basis";
    state.lineOpacity = 0.9;
    state.precedence = 0;
    renderRelationship(root, bundle, state, visible, sigIdx, { onHoverScore: () => {} });
    const after = Array.from(root.querySelectorAll<SVGCircleElement>(".score-dot"))
      .map((d) => [d.dataset.sample, d.dataset.sigIndex, d.dataset.score].join(":"));
    expect(after).toEqual(before);
  });
});
