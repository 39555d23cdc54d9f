/** Bundle access: one fetch of the whole document (service or static file),
 * plus threshold-parameterized cluster queries with stale-response
 * discarding. All derived numbers come from the backend; the local
 * assignment mirror only covers static-file mode and matches the service's
 * tie rules exactly (asserted against the fixture in tests). */

import { assignClustersLocal } from "./logic";
import type { Bundle, ClusterEntry } from "./types";

export async function loadBundle(): Promise<Bundle> {
  for (const url of ["/api/bundle", "./bundle.json"]) {
    try {
      const res = await fetch(url);
      if (res.ok) return (await res.json()) as Bundle;
    } catch {
      // fall through to the static file
    }
  }
  throw new Error("no bundle: start the service or place bundle.json next to the UI");
}

export class ClusterClient {
  private seq = 0;
  private serviceAvailable: boolean;

  constructor(private bundle: Bundle, serviceAvailable = true) {
    this.serviceAvailable = serviceAvailable;
  }

  /** Resolve cluster assignments at a threshold. Out-of-order responses are
   * dropped: only the newest request may apply. */
  async at(threshold: number, apply: (entries: ClusterEntry[]) => void): Promise<void> {
    const ticket = ++this.seq;
    const entries = await this.fetchEntries(threshold);
    if (ticket === this.seq) apply(entries);
  }

  private async fetchEntries(threshold: number): Promise<ClusterEntry[]> {
    if (threshold === this.bundle.meta.default_threshold) {
      return this.bundle.clusters;
    }
    if (this.serviceAvailable) {
      try {
        const res = await fetch(`/api/clusters?threshold=${threshold}`);
        if (res.ok) return (await res.json()) as ClusterEntry[];
      } catch {
        this.serviceAvailable = false;
      }
    }
    return assignClustersLocal(this.bundle.scores, threshold);
  }
}
