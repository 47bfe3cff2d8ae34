import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { pollJob } from "../src/jobs.js";
import type { ApiClient } from "../src/api.js";

function fakeApi(states: Array<{ status: string; result?: unknown }>): ApiClient {
  let call = 0;
  return {
    getJob: async (jobId: string) => {
      const state = states[Math.min(call, states.length - 1)];
      call += 1;
      return { job_id: jobId, ...state };
    },
  } as unknown as ApiClient;
}

describe("pollJob", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("resolves with the final ticket once the job completes", async () => {
    const api = fakeApi([
      { status: "running" },
      { status: "running" },
      { status: "complete", result: { ok: true } },
    ]);
    const promise = pollJob(api, "j1", 1000);
    await vi.advanceTimersByTimeAsync(2500);
    const ticket = await promise;
    expect(ticket.status).toBe("complete");
    expect(ticket.result).toEqual({ ok: true });
  });

  it("rejects when the job reports failure", async () => {
    const api = fakeApi([{ status: "running" }, { status: "failed" }]);
    const promise = pollJob(api, "j2", 1000);
    promise.catch(() => undefined);
    await vi.advanceTimersByTimeAsync(1500);
    await expect(promise).rejects.toThrow(/failed/);
  });

  it("gives up after the deadline", async () => {
    const api = fakeApi([{ status: "running" }]);
    const promise = pollJob(api, "j3", 1000, 3000);
    promise.catch(() => undefined);
    await vi.advanceTimersByTimeAsync(5000);
    await expect(promise).rejects.toThrow(/still running after/);
  });
});
