/**
 * Page wiring. One App instance owns one exploration session and keeps
 * every panel (board, threads, graph, metrics, rewrite editor) in step
 * with the server view after each interaction.
 */
import { ApiClient, ApiError } from "./api.js";
import { TriageBoard } from "./board.js";
import { renderGraph, runLayout, toGraphModel } from "./graphview.js";
import { pollJob } from "./jobs.js";
import { renderMetricsEmpty, renderMetricsPanel } from "./metrics.js";
import { ThreadConsole } from "./threads.js";
import type { ApiSessionView } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  role: string,
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  node.dataset.role = role;
  if (text) node.textContent = text;
  return node;
}

export class App {
  api: ApiClient;
  sessionId: string | null = null;
  view: ApiSessionView | null = null;
  board: TriageBoard | null = null;
  console: ThreadConsole | null = null;
  private root: HTMLElement | null = null;

  constructor(baseUrl: string, fetchImpl?: (input: string, init?: RequestInit) => Promise<Response>) {
    this.api = new ApiClient(baseUrl, fetchImpl);
  }

  mount(root: HTMLElement): void {
    this.root = root;
    root.textContent = "";

    const banner = el("div", "banner");
    banner.className = "banner hidden";
    const toast = el("div", "toast");
    toast.className = "toast";

    const header = document.createElement("header");
    header.append(
      el("span", "session-id", "no session"),
      el("span", "state", ""),
      banner,
      toast,
    );

    const create = document.createElement("section");
    create.className = "create-panel";
    const paragraphInput = el("textarea", "paragraph-input");
    paragraphInput.placeholder = "paragraph to work on";
    const createButton = el("button", "create-session", "start session");
    createButton.addEventListener("click", () => void this.createSession(paragraphInput.value));
    create.append(paragraphInput, createButton);

    const actions = document.createElement("nav");
    actions.className = "actions";
    const critiqueButton = el("button", "request-critique", "request critique");
    critiqueButton.addEventListener("click", () => void this.requestCritique());
    const threadButton = el("button", "open-thread", "open next thread");
    threadButton.addEventListener("click", () => void this.openThread());
    const terminateButton = el("button", "terminate", "terminate");
    this.armTwoStep(terminateButton, "confirm terminate?", () => this.terminate());
    actions.append(critiqueButton, threadButton, terminateButton);

    const board = document.createElement("section");
    board.dataset.role = "board";
    board.className = "board";

    const threads = document.createElement("section");
    threads.dataset.role = "threads";
    threads.className = "threads";

    const rewrite = document.createElement("section");
    rewrite.className = "rewrite-panel";
    const previous = el("textarea", "previous-paragraph");
    previous.readOnly = true;
    const next = el("textarea", "next-paragraph");
    next.placeholder = "rewritten paragraph";
    const rewriteButton = el("button", "rewrite", "rewrite");
    this.armTwoStep(rewriteButton, "confirm rewrite?", () => this.rewrite(next.value));
    rewrite.append(previous, next, rewriteButton);

    const annotation = document.createElement("section");
    annotation.className = "annotation-panel";
    const annotationRevision = el("input", "annotation-revision");
    annotationRevision.type = "number";
    annotationRevision.value = "0";
    const annotationText = el("textarea", "annotation-text");
    annotationText.placeholder = "concept annotation";
    const attachButton = el("button", "attach-annotation", "attach");
    attachButton.addEventListener("click", () =>
      void this.attachAnnotation(Number(annotationRevision.value), annotationText.value),
    );
    annotation.append(annotationRevision, annotationText, attachButton);

    const graph = document.createElement("section");
    graph.className = "graph-panel";
    const graphRevision = el("input", "graph-revision");
    graphRevision.type = "number";
    graphRevision.value = "0";
    const graphButton = el("button", "refresh-graph", "show graph");
    const graphBox = el("div", "graph");
    graphButton.addEventListener("click", () =>
      void this.showGraph(Number(graphRevision.value)),
    );
    graph.append(graphRevision, graphButton, graphBox);

    const metrics = document.createElement("section");
    metrics.className = "metrics-panel";
    const metricsRevision = el("input", "metrics-revision");
    metricsRevision.type = "number";
    metricsRevision.value = "0";
    const metricsButton = el("button", "refresh-metrics", "show metrics");
    const metricsBox = el("div", "metrics");
    metricsButton.addEventListener("click", () =>
      void this.showMetrics(Number(metricsRevision.value)),
    );
    metrics.append(metricsRevision, metricsButton, metricsBox);

    root.append(header, create, actions, board, threads, rewrite, annotation, graph, metrics);
  }

  private q(role: string): HTMLElement {
    const node = this.root?.querySelector(`[data-role="${role}"]`);
    if (!node) throw new Error(`missing element ${role}`);
    return node as HTMLElement;
  }

  /** Destructive actions arm on the first click and fire on the second. */
  private armTwoStep(button: HTMLElement, armedLabel: string, action: () => Promise<void>): void {
    const restLabel = button.textContent ?? "";
    button.addEventListener("click", () => {
      if (button.dataset.armed === "true") {
        button.dataset.armed = "false";
        button.textContent = restLabel;
        void action();
      } else {
        button.dataset.armed = "true";
        button.textContent = armedLabel;
      }
    });
  }

  toast(message: string): void {
    const box = this.q("toast");
    const note = document.createElement("p");
    note.textContent = message;
    box.appendChild(note);
  }

  private surface(err: unknown): void {
    if (err instanceof ApiError && err.code === "network") {
      this.q("banner").classList.remove("hidden");
      this.q("banner").textContent = "service unreachable";
    }
    this.toast(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
  }

  async refresh(): Promise<void> {
    if (!this.sessionId) return;
    this.view = await this.api.getSession(this.sessionId);
    this.q("banner").classList.add("hidden");
    this.q("session-id").textContent = this.view.id;
    this.q("state").textContent = this.view.state;
    this.board?.setFromView(this.view);
    this.console?.update(this.view);
    const previous = this.q("previous-paragraph") as HTMLTextAreaElement;
    previous.value = this.view.revisions[this.view.revisions.length - 1].paragraph;
  }

  async createSession(paragraph: string): Promise<void> {
    try {
      const view = await this.api.createSession(paragraph);
      this.sessionId = view.id;
      this.board = new TriageBoard(this.api, view.id, this.q("board"), (m) => this.toast(m));
      this.console = new ThreadConsole(
        this.api,
        view.id,
        this.q("threads"),
        () => this.refresh(),
        (m) => this.toast(m),
      );
      await this.refresh();
    } catch (err) {
      this.surface(err);
    }
  }

  async requestCritique(): Promise<void> {
    if (!this.sessionId) return;
    try {
      const ticket = await this.api.startCritique(this.sessionId);
      await pollJob(this.api, ticket.job_id);
      await this.refresh();
    } catch (err) {
      this.surface(err);
    }
  }

  async openThread(): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.api.nextThread(this.sessionId);
      await this.refresh();
    } catch (err) {
      this.surface(err);
    }
  }

  async rewrite(paragraph: string): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.api.rewrite(this.sessionId, paragraph);
      await this.refresh();
    } catch (err) {
      this.surface(err);
    }
  }

  async terminate(): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.api.terminate(this.sessionId);
      await this.refresh();
    } catch (err) {
      this.surface(err);
    }
  }

  async attachAnnotation(revision: number, text: string): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.api.attachAnnotation(this.sessionId, revision, text);
      await this.refresh();
      this.toast(`annotation attached at revision ${revision}`);
    } catch (err) {
      this.surface(err);
    }
  }

  async showGraph(revision: number): Promise<void> {
    if (!this.sessionId) return;
    try {
      const graph = await this.api.getGraph(this.sessionId, revision);
      const model = toGraphModel(graph);
      runLayout(model);
      renderGraph(this.q("graph"), model);
    } catch (err) {
      this.surface(err);
    }
  }

  async showMetrics(revision: number): Promise<void> {
    if (!this.sessionId) return;
    const box = this.q("metrics");
    try {
      renderMetricsPanel(box, await this.api.getMetrics(this.sessionId, revision));
    } catch (err) {
      if (err instanceof ApiError && (err.status === 422 || err.status === 404)) {
        renderMetricsEmpty(box, `nothing to chart: ${err.message}`);
      } else {
        this.surface(err);
      }
    }
  }
}

export function boot(): void {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "http://localhost:8000";
  const app = new App(base);
  const root = document.getElementById("app");
  if (root) app.mount(root);
  console.log(`cuegraph ui talking to ${base}`);
}
