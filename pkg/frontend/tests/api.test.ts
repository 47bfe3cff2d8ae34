import { describe, expect, it } from "vitest";
import { ApiClient, ApiError } from "../src/api.js";
import { jsonResponse } from "./helpers.js";

describe("ApiClient", () => {
  it("unwraps the error envelope into a typed ApiError", async () => {
    const fetchImpl = async () =>
      jsonResponse(409, {
        code: "triage-window-closed",
        message: "cue already locked",
        details: { cue: "PROMPT1.2" },
      });
    const api = new ApiClient("http://x", fetchImpl);
    const err = await api.triage("s1", "PROMPT1.2", "explore").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(409);
    expect(err.code).toBe("triage-window-closed");
    expect(err.message).toBe("cue already locked");
    expect(err.details).toEqual({ cue: "PROMPT1.2" });
  });

  it("falls back to a generic code when the body is not the envelope", async () => {
    const fetchImpl = async () => new Response("gateway says no", { status: 502 });
    const api = new ApiClient("http://x", fetchImpl);
    const err = await api.getSession("s1").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(502);
    expect(err.code).toBe("http-error");
  });

  it("maps transport failures to code network with status 0", async () => {
    const fetchImpl = async () => {
      throw new TypeError("fetch failed");
    };
    const api = new ApiClient("http://x", fetchImpl);
    const err = await api.getSession("s1").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
    expect(err.code).toBe("network");
  });

  it("sends the client name header on session creation", async () => {
    let seen: Record<string, string> = {};
    const fetchImpl = async (input: string, init?: RequestInit) => {
      seen = Object.fromEntries(new Headers(init?.headers).entries());
      return jsonResponse(201, { id: "s1" });
    };
    const api = new ApiClient("http://x", fetchImpl, "panel-test");
    await api.createSession("words");
    expect(seen["x-client-name"]).toBe("panel-test");
  });
});
