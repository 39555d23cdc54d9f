/** Bundle schema (version "1") as served by the backend or loaded statically. */

export interface BundleMeta {
  name: string;
  n_samples: number;
  length: number;
  n_signatures: number;
  class_names: string[];
  class_colors: string[];
  default_threshold: number;
  kde_bandwidth: number;
}

export interface SignatureEntry {
  id: number;
  rank: number;
  values: number[];
  ig: number;
  theta: number;
  source: { sample: number; start: number; end: number };
  display: boolean;
}

export interface ClusterEntry {
  cluster: number | null;
  members: boolean[];
}

export interface KdeBlock {
  grid: number[];
  bandwidth: number;
  densities: Record<string, number[]>[];
  widths: Record<string, number[]>[];
}

export interface Bundle {
  schema_version: string;
  meta: BundleMeta;
  series: number[][];
  labels: number[];
  signatures: SignatureEntry[];
  scores: number[][];
  best_offsets: number[][];
  clusters: ClusterEntry[];
  kde: KdeBlock;
  dtw: number[][];
}

export type CurveStyle = "linear" | "step" | "basis";
export type FilterMode = "union" | "intersection";
export type MatrixSortKey =
  | { kind: "id" }
  | { kind: "cluster" }
  | { kind: "class" }
  | { kind: "signature"; index: number };

/** All interactive state shared by the coordinated views. */
export interface ViewState {
  curveStyle: CurveStyle;
  lineOpacity: number; // in (0, 1]
  zoom: { start: number; end: number }; // time-step window, inclusive bounds
  followZoom: boolean;
  precedence: 0 | 1; // class drawn last (on top)
  selectedSignatures: number[]; // column indices in rank order
  filterMode: FilterMode;
  threshold: number; // in [0, 1]
  showConnections: boolean;
  filterSimilar: boolean;
  similarityCutoff: number; // DTW units
  matrixSort: MatrixSortKey;
  selectedSample: number | null; // sample index
  signatureListOrder: "rank" | "matches";
}

export function defaultState(bundle: Bundle): ViewState {
  return {
    curveStyle: "linear",
    lineOpacity: 0.35,
    zoom: { start: 0, end: bundle.meta.length - 1 },
    followZoom: false,
    precedence: 1,
    selectedSignatures: [],
    filterMode: "union",
    threshold: bundle.meta.default_threshold,
    showConnections: false,
    filterSimilar: false,
    similarityCutoff: defaultSimilarityCutoff(bundle),
    matrixSort: { kind: "id" },
    selectedSample: null,
    signatureListOrder: "rank",
  };
}

/** Default "Filter Out Similar" cutoff: a tenth of the largest DTW entry. */
export function defaultSimilarityCutoff(bundle: Bundle): number {
  let top = 0;
  for (const row of bundle.dtw) for (const v of row) top = Math.max(top, v);
  return 0.1 * top;
}

export function validateState(state: ViewState): void {
  if (!(state.threshold >= 0 && state.threshold <= 1)) {
    throw new Error(`threshold ${state.threshold} outside [0, 1]`);
  }
  if (!(state.lineOpacity > 0 && state.lineOpacity <= 1)) {
    throw new Error(`opacity ${state.lineOpacity} outside (0, 1]`);
  }
}
