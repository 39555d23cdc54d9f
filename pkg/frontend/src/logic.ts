/** Pure view logic: membership set-algebra, similarity filtering, and row
 * sorting. Every number displayed by a view comes straight from the bundle;
 * these functions only select and order. */

import type { Bundle, MatrixSortKey, ViewState } from "./types";

/** Sample indices passing the signature filter. With no selection every
 * sample is visible; otherwise membership is score >= threshold per selected
 * signature, combined by union or intersection. */
export function visibleSamples(bundle: Bundle, state: ViewState): number[] {
  const { selectedSignatures, threshold, filterMode } = state;
  if (selectedSignatures.length === 0) {
    return bundle.scores.map((_, i) => i);
  }
  const out: number[] = [];
  for (let i = 0; i < bundle.scores.length; i++) {
    const member = (j: number) => bundle.scores[i][j] >= threshold;
    const keep =
      filterMode === "union"
        ? selectedSignatures.some(member)
        : selectedSignatures.every(member);
    if (keep) out.push(i);
  }
  return out;
}

/** Members of one signature's cluster at a threshold. */
export function clusterMembers(bundle: Bundle, j: number, threshold: number): number[] {
  const out: number[] = [];
  for (let i = 0; i < bundle.scores.length; i++) {
    if (bundle.scores[i][j] >= threshold) out.push(i);
  }
  return out;
}

/** Mirror of the service's cluster assignment (argmax score among members,
 * smallest index on ties); used only when the service is unreachable and
 * asserted equal to the bundle's precomputed entries at the default
 * threshold. */
export function assignClustersLocal(
  scores: number[][],
  threshold: number,
): { cluster: number | null; members: boolean[] }[] {
  return scores.map((row) => {
    const members = row.map((s) => s >= threshold);
    let cluster: number | null = null;
    if (members.some(Boolean)) {
      let best = 0;
      for (let j = 1; j < row.length; j++) if (row[j] > row[best]) best = j;
      cluster = best;
    }
    return { cluster, members };
  });
}

/** Signature columns to draw, in rank order. With "Filter Out Similar" on, a
 * signature is hidden when its DTW distance to any higher-ranked *visible*
 * signature is at or below the cutoff. */
export function visibleSignatures(bundle: Bundle, state: ViewState): number[] {
  const all = bundle.signatures.map((_, j) => j);
  if (!state.filterSimilar) return all;
  const kept: number[] = [];
  for (const j of all) {
    const similar = kept.some((k) => bundle.dtw[j][k] <= state.similarityCutoff);
    if (!similar) kept.push(j);
  }
  return kept;
}

export interface MatrixRow {
  sample: number;
  cluster: number | null;
  label: number;
  scores: number[];
}

export function matrixRows(bundle: Bundle, visible: number[]): MatrixRow[] {
  return visible.map((i) => ({
    sample: i,
    cluster: bundle.clusters[i].cluster,
    label: bundle.labels[i],
    scores: bundle.scores[i],
  }));
}

/** The four row orderings. Sample id breaks every tie so orders are total. */
export function sortRows(rows: MatrixRow[], key: MatrixSortKey, descending = true): MatrixRow[] {
  const sorted = [...rows];
  const byId = (a: MatrixRow, b: MatrixRow) => a.sample - b.sample;
  switch (key.kind) {
    case "id":
      sorted.sort(byId);
      break;
    case "cluster":
      // unclustered rows sink to the bottom
      sorted.sort((a, b) => {
        const ca = a.cluster === null ? Number.POSITIVE_INFINITY : a.cluster;
        const cb = b.cluster === null ? Number.POSITIVE_INFINITY : b.cluster;
        return ca - cb || byId(a, b);
      });
      break;
    case "class":
      sorted.sort((a, b) => a.label - b.label || byId(a, b));
      break;
    case "signature":
      sorted.sort((a, b) => {
        const d = a.scores[key.index] - b.scores[key.index];
        return (descending ? -d : d) || byId(a, b);
      });
      break;
  }
  return sorted;
}

/** Per-signature match counts over the visible samples (signature-list
 * reordering by number of matching samples). */
export function matchCounts(bundle: Bundle, visible: number[], threshold: number): number[] {
  return bundle.signatures.map((_, j) => {
    let n = 0;
    for (const i of visible) if (bundle.scores[i][j] >= threshold) n++;
    return n;
  });
}

/** Class tally of a sample-index set. */
export function classCounts(bundle: Bundle, samples: number[]): [number, number] {
  let a = 0;
  let b = 0;
  for (const i of samples) (bundle.labels[i] === 0 ? a++ : b++);
  return [a, b];
}

export function formatPercent(score: number): string {
  return `${Math.round(score * 100)}%`;
}
