import type { ApiCue, ApiSessionView } from "../src/types.js";

export function makeCue(partial: Partial<ApiCue> & { id: string }): ApiCue {
  return {
    label: partial.id,
    body: "",
    response_id: "r1",
    prompt_ordinal: 1,
    item_index: 1,
    triage: null,
    triage_seq: null,
    thread_id: null,
    selected_in: null,
    ...partial,
  };
}

export function makeView(partial: Partial<ApiSessionView> = {}): ApiSessionView {
  return {
    id: "s1",
    client: "test",
    state: "triage_pending",
    revisions: [{ revision: 0, paragraph: "A paragraph." }],
    prompts: [],
    responses: [],
    cues: [],
    threads: [],
    annotations: {},
    events: [],
    ...partial,
  };
}

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

/** Route-table fetch stub: "METHOD /path" keys, handlers or canned bodies. */
export function routedFetch(
  routes: Record<string, unknown | ((body: unknown) => unknown)>,
): (input: string, init?: RequestInit) => Promise<Response> {
  return async (input, init) => {
    const method = init?.method ?? "GET";
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    const key = `${method} ${path}`;
    if (!(key in routes)) {
      return jsonResponse(404, { code: "unknown-route", message: key, details: null });
    }
    const handler = routes[key];
    const requestBody = init?.body ? JSON.parse(init.body as string) : undefined;
    const body = typeof handler === "function" ? (handler as Function)(requestBody) : handler;
    if (body instanceof Response) return body;
    return jsonResponse(200, body);
  };
}
