/**
 * Full-loop test against the real HTTP service: boots `cuegraph serve`
 * with the bundled replay backend, mounts the page in jsdom, and drives
 * create, triage, threads, one combination, and the rewrite through the
 * rendered controls. After every step the board in the DOM must equal
 * the board derived from a fresh server fetch.
 */
import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { ApiClient } from "../src/api.js";
import { App } from "../src/app.js";
import { boardFromView, COLUMNS, readBoard, type Column, type TriageBoardModel } from "../src/board.js";
import type { TriageCategory } from "../src/types.js";

// vitest runs from frontend/; the service package sits one level up
const FIXTURES = resolve(process.cwd(), "..", "src", "cuegraph", "fixtures");
const PARAGRAPH = readFileSync(join(FIXTURES, "analogy_paragraph.txt"), "utf8");
const ANNOTATION = readFileSync(join(FIXTURES, "analogy_initial.cga"), "utf8");

const TRIAGE_PLAN: Array<[string, TriageCategory]> = [
  ["PROMPT1.1", "explore"],
  ["PROMPT1.3", "explore"],
  ["PROMPT1.2", "evaluate"],
  ["PROMPT1.4", "evaluate"],
  ["PROMPT1.5", "ignore"],
  ["PROMPT1.6", "ignore"],
];

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port assigned"));
        return;
      }
      probe.close(() => resolve(address.port));
    });
  });
}

async function waitFor(
  condition: () => boolean | Promise<boolean>,
  timeoutMs = 15000,
  intervalMs = 50,
): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    if (await condition()) return;
    if (Date.now() > deadline) throw new Error("condition not met in time");
    await new Promise((r) => setTimeout(r, intervalMs));
  }
}

function columnIds(model: TriageBoardModel): Record<Column, string[]> {
  return Object.fromEntries(
    COLUMNS.map((column) => [column, model.columns[column].map((card) => card.id)]),
  ) as Record<Column, string[]>;
}

describe("exploration loop in the browser", () => {
  let server: ChildProcess;
  let dataDir: string;
  let base: string;
  let serverLog = "";
  let api: ApiClient;
  let app: App;
  let root: HTMLElement;

  const boardBox = () => root.querySelector('[data-role="board"]') as HTMLElement;
  const click = (selector: string) => {
    const node = root.querySelector(selector) as HTMLElement | null;
    if (!node) throw new Error(`nothing matches ${selector}`);
    node.click();
  };
  const setValue = (selector: string, value: string) => {
    const node = root.querySelector(selector) as HTMLInputElement | null;
    if (!node) throw new Error(`nothing matches ${selector}`);
    node.value = value;
  };
  const sessionId = () => {
    if (!app.sessionId) throw new Error("no session yet");
    return app.sessionId;
  };

  /** The acceptance check proper: rendered columns == columns computed
   *  from a fresh GET of the session. Waits out in-flight refreshes. */
  async function expectBoardMirrorsServer(): Promise<void> {
    await waitFor(async () => {
      const view = await api.getSession(sessionId());
      return (
        JSON.stringify(columnIds(boardFromView(view))) ===
        JSON.stringify(readBoard(boardBox()))
      );
    });
    const view = await api.getSession(sessionId());
    expect(readBoard(boardBox())).toEqual(columnIds(boardFromView(view)));
  }

  beforeAll(async () => {
    const port = await freePort();
    base = `http://127.0.0.1:${port}`;
    dataDir = mkdtempSync(join(tmpdir(), "cuegraph-e2e-"));
    server = spawn(
      "cuegraph",
      [
        "serve",
        "--port",
        String(port),
        "--data-dir",
        dataDir,
        "--provider",
        `replay:${join(FIXTURES, "analogy_replay.json")}`,
      ],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
    server.stdout?.on("data", (chunk) => (serverLog += chunk));
    server.stderr?.on("data", (chunk) => (serverLog += chunk));
    try {
      await waitFor(
        async () => {
          try {
            return (await fetch(`${base}/sessions`)).ok;
          } catch {
            return false;
          }
        },
        20000,
        250,
      );
    } catch (err) {
      throw new Error(`service never came up:\n${serverLog}`, { cause: err });
    }
    api = new ApiClient(base, undefined, "e2e-check");
  });

  afterAll(() => {
    server?.kill("SIGTERM");
    if (dataDir) rmSync(dataDir, { recursive: true, force: true });
  });

  it("drives the whole loop through the page and stays in lockstep with the server", async () => {
    root = document.createElement("div");
    document.body.appendChild(root);
    app = new App(base);
    app.mount(root);

    // create a session from the sample paragraph
    setValue('[data-role="paragraph-input"]', PARAGRAPH);
    click('[data-role="create-session"]');
    await waitFor(() => app.sessionId !== null);
    await waitFor(
      () => root.querySelector('[data-role="state"]')!.textContent === "awaiting_critique",
    );
    await expectBoardMirrorsServer();

    // critique runs as a job; six cue cards land in "unassigned"
    click('[data-role="request-critique"]');
    await waitFor(() => boardBox().querySelectorAll("[data-cue-id]").length === 6, 20000);
    expect(root.querySelector('[data-role="state"]')!.textContent).toBe("triage_pending");
    await expectBoardMirrorsServer();

    // triage all six cues with the per-card buttons
    for (const [cueId, target] of TRIAGE_PLAN) {
      click(`[data-cue-id="${cueId}"] button[data-move-to="${target}"]`);
      await waitFor(async () => {
        const view = await api.getSession(sessionId());
        return view.cues.find((c) => c.id === cueId)?.triage === target;
      });
      await expectBoardMirrorsServer();
    }

    // two threads open on the two explore cues, best scored first
    click('[data-role="open-thread"]');
    await waitFor(() => root.querySelector('[data-thread-id="t1"]') !== null);
    await expectBoardMirrorsServer();
    click('[data-role="open-thread"]');
    await waitFor(() => root.querySelector('[data-thread-id="t2"]') !== null);
    await expectBoardMirrorsServer();

    const afterThreads = await api.getSession(sessionId());
    expect(afterThreads.state).toBe("thread_open");
    expect(afterThreads.threads.map((t) => [t.id, t.root_cue_id])).toEqual([
      ["t1", "PROMPT1.1"],
      ["t2", "PROMPT1.3"],
    ]);

    // one combination of the two thread roots
    setValue('[data-role="cue-a"]', "PROMPT1.1");
    setValue('[data-role="cue-b"]', "PROMPT1.3");
    setValue('[data-role="combine-kind"]', "balance");
    click('[data-role="fire-combine"]');
    await waitFor(async () => {
      const view = await api.getSession(sessionId());
      return view.prompts.length === 2 && view.prompts[1].answered;
    });
    await expectBoardMirrorsServer();

    const afterCombine = await api.getSession(sessionId());
    const combination = afterCombine.prompts[1];
    expect(combination.kind).toBe("balance");
    expect(combination.thread_id).toBeNull();
    const rendered = root.querySelector(`[data-prompt-id="${combination.id}"]`)!;
    expect(rendered.querySelector(".prompt-text")!.textContent).toBe(combination.text);
    expect(rendered.querySelector(".status-answered")).not.toBeNull();

    // rewrite asks for confirmation: the first click must not commit
    const improved = `${PARAGRAPH.trim()} The revision names the swan as its example.`;
    setValue('[data-role="next-paragraph"]', improved);
    click('[data-role="rewrite"]');
    expect(
      (root.querySelector('[data-role="rewrite"]') as HTMLElement).dataset.armed,
    ).toBe("true");
    expect((await api.getSession(sessionId())).revisions).toHaveLength(1);

    click('[data-role="rewrite"]');
    await waitFor(async () => (await api.getSession(sessionId())).revisions.length === 2);
    await waitFor(
      () => root.querySelector('[data-role="state"]')!.textContent === "done",
    );
    const finished = await api.getSession(sessionId());
    expect(finished.revisions[1].paragraph).toBe(improved);
    await expectBoardMirrorsServer();

    // metrics panel over the annotated first revision
    setValue('[data-role="annotation-revision"]', "0");
    setValue('[data-role="annotation-text"]', ANNOTATION);
    click('[data-role="attach-annotation"]');
    await waitFor(async () => "0" in (await api.getSession(sessionId())).annotations);

    setValue('[data-role="metrics-revision"]', "0");
    click('[data-role="refresh-metrics"]');
    await waitFor(() => root.querySelector(".metrics-summary") !== null);
    const summary = root.querySelector(".metrics-summary") as HTMLElement;
    expect(summary.dataset.conceptCount).toBe("24");
    const bars = root.querySelectorAll('[data-role="metrics"] .bars .bar');
    const histogram = Object.fromEntries(
      Array.from(bars).map((bar) => [
        (bar as HTMLElement).dataset.length,
        Number((bar as HTMLElement).dataset.count),
      ]),
    );
    expect(histogram).toEqual({ "2": 1, "3": 5, "4": 3, "5": 4 });
  }, 60000);
});
