import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiError, Client } from "../src/api.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("Client", () => {
  it("creates games with the exact protocol body", async () => {
    const calls: Array<{ url: string; init?: RequestInit }> = [];
    vi.stubGlobal("fetch", async (url: string, init?: RequestInit) => {
      calls.push({ url, init });
      return jsonResponse({ id: "g1", state: { words: { u: "ab", v: "ba" } } });
    });
    const client = new Client("");
    const got = await client.createGame({
      u: "ab", v: "ba", s: 2, m: 0, sig: "less", humanRole: "spoiler",
    });
    expect(got.id).toBe("g1");
    expect(calls[0].url).toBe("/games");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      u: "ab", v: "ba", s: 2, m: 0, sig: "less", humanRole: "spoiler",
    });
  });

  it("submits any clicked move untouched: the server is the judge", async () => {
    const bodies: unknown[] = [];
    vi.stubGlobal("fetch", async (_url: string, init?: RequestInit) => {
      bodies.push(JSON.parse(String(init?.body)));
      return jsonResponse({ state: {} });
    });
    const client = new Client("");
    // an "obviously" illegal position still goes to the server verbatim
    await client.postMove("g1", "u", 999);
    expect(bodies[0]).toEqual({ side: "u", position: 999 });
  });

  it("surfaces 422 rejections as ApiError with the server reason", async () => {
    vi.stubGlobal("fetch", async () =>
      jsonResponse({ detail: "position outside the allowed set" }, 422));
    const client = new Client("");
    try {
      await client.postMove("g1", "v", 3);
      throw new Error("should have thrown");
    } catch (err) {
      expect(err).toBeInstanceOf(ApiError);
      expect((err as ApiError).status).toBe(422);
      expect((err as ApiError).detail).toMatch(/allowed set/);
    }
  });

  it("fetches hints via GET", async () => {
    const urls: string[] = [];
    vi.stubGlobal("fetch", async (url: string) => {
      urls.push(url);
      return jsonResponse({ side: "u", position: 1, winning: true });
    });
    const client = new Client("");
    const hint = await client.getHint("abc");
    expect(urls[0]).toBe("/games/abc/hint");
    expect(hint.winning).toBe(true);
  });

  it("reads state from the envelope", async () => {
    vi.stubGlobal("fetch", async () =>
      jsonResponse({ state: { words: { u: "a", v: "b" }, roundsUsed: 1 } }));
    const client = new Client("http://srv");
    const state = await client.getState("xyz");
    expect(state.roundsUsed).toBe(1);
  });
});
