/**
 * Thin fetch wrapper around the exploration service.
 *
 * Every non-2xx answer carries a {code, message, details} envelope; that
 * envelope is rethrown as an ApiError so callers can branch on the code.
 * Transport failures (server down, DNS, refused) surface with the
 * synthetic code "network" and should trigger the offline banner.
 */
import type {
  ApiGraph,
  ApiMetrics,
  ApiSessionView,
  JobTicket,
  TriageCategory,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
    public details: unknown = null,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    public baseUrl: string,
    private fetchImpl: FetchLike = (...args) => globalThis.fetch(...args),
    public clientName = "browser",
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers: {
          "content-type": "application/json",
          "x-client-name": this.clientName,
        },
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (err) {
      throw new ApiError(0, "network", `cannot reach ${this.baseUrl}: ${String(err)}`);
    }
    if (!response.ok) {
      let code = "http-error";
      let message = `${method} ${path} failed with ${response.status}`;
      let details: unknown = null;
      try {
        const envelope = await response.json();
        if (envelope && typeof envelope.code === "string") {
          code = envelope.code;
          message = envelope.message ?? message;
          details = envelope.details ?? null;
        }
      } catch {
        // non-JSON error body, keep the generic message
      }
      throw new ApiError(response.status, code, message, details);
    }
    return (await response.json()) as T;
  }

  get<T>(path: string): Promise<T> {
    return this.request<T>("GET", path);
  }

  post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>("POST", path, body);
  }

  // --- session endpoints ---

  createSession(paragraph: string): Promise<ApiSessionView> {
    return this.post("/sessions", { paragraph });
  }

  getSession(id: string): Promise<ApiSessionView> {
    return this.get(`/sessions/${id}`);
  }

  startCritique(id: string): Promise<JobTicket> {
    return this.post(`/sessions/${id}/jobs/critique`);
  }

  getJob(jobId: string): Promise<JobTicket> {
    return this.get(`/jobs/${jobId}`);
  }

  triage(id: string, cueId: string, category: TriageCategory) {
    return this.post<{ cue_id: string; category: string; state: string }>(
      `/sessions/${id}/cues/${cueId}/triage`,
      { category },
    );
  }

  nextThread(id: string) {
    return this.post<{ thread_id: string; root_cue_id: string; state: string }>(
      `/sessions/${id}/threads/next`,
    );
  }

  detail(id: string, threadId: string, kind: string, cueText?: string) {
    return this.post<{ prompt_id: string; text: string; answered: boolean; cue_ids: string[] }>(
      `/sessions/${id}/threads/${threadId}/detail`,
      cueText === undefined ? { kind } : { kind, cue_text: cueText },
    );
  }

  selectCues(id: string, threadId: string, cueIds: string[]) {
    return this.post<{ thread_id: string; cue_ids: string[] }>(
      `/sessions/${id}/threads/${threadId}/select`,
      { cue_ids: cueIds },
    );
  }

  combine(id: string, cueA: string, cueB: string, kind: string) {
    return this.post<{ prompt_id: string; text: string; answered: boolean; cue_ids: string[] }>(
      `/sessions/${id}/combine`,
      { cue_a: cueA, cue_b: cueB, kind },
    );
  }

  rewrite(id: string, paragraph: string) {
    return this.post<{ revision: number; state: string }>(`/sessions/${id}/rewrite`, {
      paragraph,
    });
  }

  terminate(id: string) {
    return this.post<{ state: string }>(`/sessions/${id}/terminate`);
  }

  attachAnnotation(id: string, revision: number, text: string) {
    return this.post<{ revision: number; attached: boolean }>(
      `/sessions/${id}/annotation`,
      { revision, text },
    );
  }

  getGraph(id: string, revision = 0): Promise<ApiGraph> {
    return this.get(`/sessions/${id}/graph?revision=${revision}&format=json`);
  }

  getMetrics(id: string, revision = 0): Promise<ApiMetrics> {
    return this.get(`/sessions/${id}/metrics?revision=${revision}`);
  }
}
