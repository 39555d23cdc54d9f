import { describe, expect, it } from "vitest";

import fixtureJson from "./fixture/bundle.json";
import {
  assignClustersLocal,
  clusterMembers,
  matchCounts,
  matrixRows,
  sortRows,
  visibleSamples,
  visibleSignatures,
} from "../src/logic";
import type { Bundle } from "../src/types";
import { defaultState } from "../src/types";

const bundle = fixtureJson as unknown as Bundle;

describe("visibleSamples", () => {
  it("shows everything with no selection", () => {
    const state = defaultState(bundle);
    expect(visibleSamples(bundle, state)).toHaveLength(bundle.meta.n_samples);
  });

  it("raising the threshold never adds a sample (anti-monotone)", () => {
    const state = defaultState(bundle);
    state.selectedSignatures = [0, 2];
    for (const mode of ["union", "intersection"] as const) {
      state.filterMode = mode;
      let previous: Set<number> | null = null;
      for (const t of [0, 0.2, 0.4, 0.6, 0.8, 1.0]) {
        const now = new Set(visibleSamples(bundle, { ...state, threshold: t }));
        if (previous !== null) {
          for (const i of now) expect(previous.has(i)).toBe(true);
        }
        previous = now;
      }
    }
  });

  it("intersection members are a subset of union members", () => {
    const state = defaultState(bundle);
    state.selectedSignatures = [0, 1, 3];
    state.threshold = 0.5;
    const union = new Set(visibleSamples(bundle, { ...state, filterMode: "union" }));
    const inter = visibleSamples(bundle, { ...state, filterMode: "intersection" });
    for (const i of inter) expect(union.has(i)).toBe(true);
  });

  it("membership means score >= threshold on the exact bundle scores", () => {
    const state = defaultState(bundle);
    state.selectedSignatures = [1];
    state.threshold = 0.63;
    const got = visibleSamples(bundle, state);
    const expected = bundle.scores
      .map((row, i) => (row[1] >= 0.63 ? i : -1))
      .filter((i) => i >= 0);
    expect(got).toEqual(expected);
  });

  it("cluster-chip selection and signature-list selection agree", () => {
    // both views toggle the same selection, so the visible set must match
    // the per-signature member list exactly
    const state = defaultState(bundle);
    state.selectedSignatures = [2];
    expect(visibleSamples(bundle, state)).toEqual(
      clusterMembers(bundle, 2, state.threshold),
    );
  });
});

describe("assignClustersLocal", () => {
  it("reproduces the bundle's precomputed clusters at the default threshold", () => {
    const local = assignClustersLocal(bundle.scores, bundle.meta.default_threshold);
    expect(local).toEqual(bundle.clusters);
  });
});

describe("visibleSignatures", () => {
  it("keeps every signature when the similarity filter is off", () => {
    const state = defaultState(bundle);
    expect(visibleSignatures(bundle, state)).toHaveLength(bundle.signatures.length);
  });

  it("hides signatures within the DTW cutoff of a higher-ranked one", () => {
    const state = defaultState(bundle);
    state.filterSimilar = true;
    state.similarityCutoff = 0; // only exact duplicates collapse
    expect(visibleSignatures(bundle, state)).toHaveLength(bundle.signatures.length);
    state.similarityCutoff = Number.POSITIVE_INFINITY; // everything is similar
    expect(visibleSignatures(bundle, state)).toEqual([0]);
  });

  it("a zero-distance pair keeps only the higher-ranked signature", () => {
    const doctored: Bundle = JSON.parse(JSON.stringify(bundle));
    doctored.dtw[3][1] = 0;
    doctored.dtw[1][3] = 0;
    const state = defaultState(doctored);
    state.filterSimilar = true;
    state.similarityCutoff = 0;
    const kept = visibleSignatures(doctored, state);
    expect(kept).toContain(1);
    expect(kept).not.toContain(3);
  });
});

describe("sortRows", () => {
  const rows = matrixRows(bundle, visibleSamples(bundle, defaultState(bundle)));

  it("by sample id", () => {
    const ids = sortRows(rows, { kind: "id" }).map((r) => r.sample);
    expect(ids).toEqual([...ids].sort((a, b) => a - b));
  });

  it("by signature score, non-increasing", () => {
    for (let j = 0; j < bundle.signatures.length; j++) {
      const scores = sortRows(rows, { kind: "signature", index: j }).map(
        (r) => r.scores[j],
      );
      for (let i = 1; i < scores.length; i++) {
        expect(scores[i]).toBeLessThanOrEqual(scores[i - 1]);
      }
    }
  });

  it("by signature score ascending when requested", () => {
    const scores = sortRows(rows, { kind: "signature", index: 0 }, false).map(
      (r) => r.scores[0],
    );
    for (let i = 1; i < scores.length; i++) {
      expect(scores[i]).toBeGreaterThanOrEqual(scores[i - 1]);
    }
  });

  it("by cluster groups identical clusters contiguously", () => {
    const clusters = sortRows(rows, { kind: "cluster" }).map((r) =>
      r.cluster === null ? "none" : String(r.cluster),
    );
    const seen = new Set<string>();
    let current = "";
    for (const c of clusters) {
      if (c !== current) {
        expect(seen.has(c)).toBe(false);
        seen.add(c);
        current = c;
      }
    }
  });

  it("by class is non-decreasing in the label", () => {
    const labels = sortRows(rows, { kind: "class" }).map((r) => r.label);
    for (let i = 1; i < labels.length; i++) {
      expect(labels[i]).toBeGreaterThanOrEqual(labels[i - 1]);
    }
  });

  it("does not mutate its input", () => {
    const before = rows.map((r) => r.sample);
    sortRows(rows, { kind: "cluster" });
    expect(rows.map((r) => r.sample)).toEqual(before);
  });
});

describe("matchCounts", () => {
  it("counts exactly the samples at or above the threshold", () => {
    const visible = bundle.scores.map((_, i) => i);
    const counts = matchCounts(bundle, visible, 0.7);
    counts.forEach((n, j) => {
      const expected = bundle.scores.filter((row) => row[j] >= 0.7).length;
      expect(n).toBe(expected);
    });
  });
});
