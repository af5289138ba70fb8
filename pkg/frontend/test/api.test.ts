import { describe, expect, it } from "vitest";

import { ApiError, PlannerClient } from "../src/api";

interface Recorded {
  url: string;
  init?: RequestInit;
}

function stubFetch(status: number, body: unknown) {
  const calls: Recorded[] = [];
  const fn = (async (url: any, init?: RequestInit) => {
    calls.push({ url: String(url), init });
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  }) as typeof fetch;
  return { fn, calls };
}

describe("PlannerClient", () => {
  it("PUTs synthetic terrain as JSON", async () => {
    const { fn, calls } = stubFetch(200, { n_rows: 5 });
    const client = new PlannerClient("http://api", fn);
    await client.loadSyntheticTerrain({
      synthetic: {
        seed: 0,
        n_rows: 5,
        n_cols: 5,
        cell_size: 100,
        base_rci: 80,
        valley_depth: 70,
        valley_count: 3,
        smoothness: 6,
      },
    });
    expect(calls).toHaveLength(1);
    expect(calls[0]!.url).toBe("http://api/terrain");
    expect(calls[0]!.init?.method).toBe("PUT");
    const sent = JSON.parse(String(calls[0]!.init?.body));
    expect(sent.synthetic.seed).toBe(0);
  });

  it("PUTs raw ASCII terrain as plain text", async () => {
    const { fn, calls } = stubFetch(200, {});
    const client = new PlannerClient("", fn);
    await client.loadAsciiTerrain("ncols 2\nnrows 1\n...");
    const headers = calls[0]!.init?.headers as Record<string, string>;
    expect(headers["Content-Type"]).toBe("text/plain");
    expect(calls[0]!.init?.body).toContain("ncols 2");
  });

  it("POSTs the commit body the service expects", async () => {
    const { fn, calls } = stubFetch(200, {
      route_id: "abc",
      already_committed: false,
      history_cell_count: 3,
    });
    const client = new PlannerClient("", fn);
    const res = await client.commit("abc");
    expect(calls[0]!.url).toBe("/history/commit");
    expect(JSON.parse(String(calls[0]!.init?.body))).toEqual({
      route_id: "abc",
    });
    expect(res.already_committed).toBe(false);
  });

  it("DELETEs history", async () => {
    const { fn, calls } = stubFetch(200, { cleared_routes: 2 });
    const client = new PlannerClient("", fn);
    const res = await client.clearHistory();
    expect(calls[0]!.init?.method).toBe("DELETE");
    expect(res.cleared_routes).toBe(2);
  });

  it("surfaces the server's detail text on errors", async () => {
    const { fn } = stubFetch(422, { detail: "end cell (5, 5) is unreachable" });
    const client = new PlannerClient("", fn);
    await expect(client.solve()).rejects.toThrowError(ApiError);
    await expect(client.solve()).rejects.toThrow(/unreachable/);
  });

  it("keeps the status text when the error body is not JSON", async () => {
    const fn = (async () =>
      new Response("<html>boom</html>", {
        status: 502,
        statusText: "Bad Gateway",
      })) as typeof fetch;
    const client = new PlannerClient("", fn);
    try {
      await client.history();
      expect.unreachable("history() should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(502);
    }
  });
});
