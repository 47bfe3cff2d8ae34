import type { ApiClient } from "./api.js";
import type { JobTicket } from "./types.js";

/**
 * Poll a job ticket until it leaves the running state.
 * Resolves with the finished ticket, rejects if the job fails or the
 * deadline passes. The service currently completes jobs synchronously,
 * so the first poll usually settles it.
 */
export function pollJob(
  api: ApiClient,
  jobId: string,
  intervalMs = 1000,
  timeoutMs = 30000,
): Promise<JobTicket> {
  const deadline = Date.now() + timeoutMs;
  return new Promise((resolve, reject) => {
    const tick = async () => {
      let ticket: JobTicket;
      try {
        ticket = await api.getJob(jobId);
      } catch (err) {
        reject(err);
        return;
      }
      if (ticket.status === "complete") {
        resolve(ticket);
      } else if (ticket.status === "failed") {
        reject(new Error(`job ${jobId} failed`));
      } else if (Date.now() >= deadline) {
        reject(new Error(`job ${jobId} still ${ticket.status} after ${timeoutMs}ms`));
      } else {
        setTimeout(tick, intervalMs);
      }
    };
    void tick();
  });
}
