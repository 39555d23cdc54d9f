import { afterEach, describe, expect, it, vi } from "vitest";

import fixtureJson from "./fixture/bundle.json";
import { ClusterClient, loadBundle } from "../src/api";
import { assignClustersLocal } from "../src/logic";
import type { Bundle, ClusterEntry } from "../src/types";

const bundle = fixtureJson as unknown as Bundle;

afterEach(() => {
  vi.unstubAllGlobals();
});

function jsonResponse(payload: unknown): Response {
  return {
    ok: true,
    json: () => Promise.resolve(payload),
  } as unknown as Response;
}

describe("ClusterClient", () => {
  it("serves the precomputed entries at the default threshold without fetching", async () => {
    const fetchSpy = vi.fn();
    vi.stubGlobal("fetch", fetchSpy);
    const client = new ClusterClient(bundle);
    let got: ClusterEntry[] | null = null;
    await client.at(bundle.meta.default_threshold, (entries) => (got = entries));
    expect(got).toEqual(bundle.clusters);
    expect(fetchSpy).not.toHaveBeenCalled();
  });

  it("queries the service at other thresholds", async () => {
    const remote = assignClustersLocal(bundle.scores, 0.25);
    const fetchSpy = vi.fn(() => Promise.resolve(jsonResponse(remote)));
    vi.stubGlobal("fetch", fetchSpy);
    const client = new ClusterClient(bundle);
    let got: ClusterEntry[] | null = null;
    await client.at(0.25, (entries) => (got = entries));
    expect(fetchSpy).toHaveBeenCalledWith("/api/clusters?threshold=0.25");
    expect(got).toEqual(remote);
  });

  it("discards stale responses when requests overtake each other", async () => {
    // first request resolves after the second: only the newest may apply
    const resolvers: ((r: Response) => void)[] = [];
    vi.stubGlobal("fetch", vi.fn(() => new Promise<Response>((res) => resolvers.push(res))));
    const client = new ClusterClient(bundle);
    const applied: number[] = [];
    const first = client.at(0.1, () => applied.push(1));
    const second = client.at(0.2, () => applied.push(2));
    expect(resolvers).toHaveLength(2);
    resolvers[1](jsonResponse(assignClustersLocal(bundle.scores, 0.2)));
    await second;
    resolvers[0](jsonResponse(assignClustersLocal(bundle.scores, 0.1)));
    await first;
    expect(applied).toEqual([2]); // the stale reply never applied
  });

  it("falls back to the exact local mirror when the service is down", async () => {
    vi.stubGlobal("fetch", vi.fn(() => Promise.reject(new Error("connection refused"))));
    const client = new ClusterClient(bundle);
    let got: ClusterEntry[] | null = null;
    await client.at(0.4, (entries) => (got = entries));
    expect(got).toEqual(assignClustersLocal(bundle.scores, 0.4));
  });
});

describe("loadBundle", () => {
  it("prefers the service endpoint", async () => {
    vi.stubGlobal("fetch", vi.fn((url: string) =>
      url === "/api/bundle"
        ? Promise.resolve(jsonResponse(bundle))
        : Promise.reject(new Error("unexpected"))));
    expect((await loadBundle()).meta.name).toBe(bundle.meta.name);
  });

  it("falls back to the static file when the service is absent", async () => {
    vi.stubGlobal("fetch", vi.fn((url: string) =>
      url === "./bundle.json"
        ? Promise.resolve(jsonResponse(bundle))
        : Promise.reject(new Error("no service"))));
    expect((await loadBundle()).meta.n_samples).toBe(bundle.meta.n_samples);
  });

  it("reports a clear error when neither source exists", async () => {
    vi.stubGlobal("fetch", vi.fn(() => Promise.reject(new Error("offline"))));
    await expect(loadBundle()).rejects.toThrow("no bundle");
  });
});
