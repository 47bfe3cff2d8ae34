/**
 * Thread console: composer for detailing and combination prompts plus a
 * viewer for what came back. Mirrors the server's prompt catalog by kind
 * name only; the server instantiates the actual template text.
 */
import { ApiClient, ApiError } from "./api.js";
import type { ApiSessionView } from "./types.js";

export const DETAILING_KINDS = [
  "elaborate_on",
  "expand",
  "example_request",
  "contemporary_example",
  "famous_individuals",
  "famous_characters",
  "highlight_in_paragraph",
] as const;

export const COMBINATION_KINDS = ["balance", "convey", "express_in", "influenced_by"] as const;

export interface FireResult {
  prompt_id: string;
  text: string;
  answered: boolean;
  cue_ids: string[];
}

export class ThreadConsole {
  private view: ApiSessionView | null = null;

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private container: HTMLElement,
    private onChange: () => Promise<void>,
    private onError: (message: string) => void = () => {},
  ) {}

  update(view: ApiSessionView): void {
    this.view = view;
    this.render();
  }

  private composerEnabled(): boolean {
    return this.view !== null && this.view.state === "thread_open";
  }

  render(): void {
    this.container.textContent = "";
    if (!this.view) return;
    const view = this.view;

    for (const thread of view.threads) {
      const root = view.cues.find((c) => c.id === thread.root_cue_id);
      const panel = document.createElement("section");
      panel.className = "thread";
      panel.dataset.threadId = thread.id;
      const heading = document.createElement("h3");
      heading.textContent = `${thread.id}: ${root ? root.label : thread.root_cue_id}`;
      panel.appendChild(heading);
      panel.appendChild(this.renderComposer(thread.id, root ? root.label : ""));
      for (const promptId of thread.prompt_ids) {
        panel.appendChild(this.renderPrompt(promptId));
      }
      this.container.appendChild(panel);
    }

    this.container.appendChild(this.renderCombiner());
    // prompts that belong to no thread: critique and combinations
    for (const prompt of view.prompts) {
      if (prompt.thread_id === null && prompt.kind !== "critique") {
        this.container.appendChild(this.renderPrompt(prompt.id));
      }
    }
  }

  private renderComposer(threadId: string, rootLabel: string): HTMLElement {
    const form = document.createElement("div");
    form.className = "composer";
    const picker = document.createElement("select");
    picker.dataset.role = "kind";
    for (const kind of DETAILING_KINDS) {
      const option = document.createElement("option");
      option.value = kind;
      option.textContent = kind.replace(/_/g, " ");
      picker.appendChild(option);
    }
    const cueInput = document.createElement("input");
    cueInput.dataset.role = "cue-text";
    cueInput.placeholder = "cue text";
    cueInput.value = rootLabel;
    const fire = document.createElement("button");
    fire.type = "button";
    fire.dataset.role = "fire-detail";
    fire.textContent = "ask";
    const enabled = this.composerEnabled();
    picker.disabled = !enabled;
    cueInput.disabled = !enabled;
    fire.disabled = !enabled;
    fire.addEventListener("click", () => {
      void this.fireDetail(threadId, picker.value, cueInput.value);
    });
    form.append(picker, cueInput, fire);
    return form;
  }

  private renderCombiner(): HTMLElement {
    const view = this.view!;
    const form = document.createElement("div");
    form.className = "combiner";
    const heading = document.createElement("h3");
    heading.textContent = "Combine cues";
    form.appendChild(heading);

    // anything rooted in or selected by a thread is fair game
    const eligible = view.cues.filter((c) => c.thread_id !== null || c.selected_in !== null);
    const pickCue = (role: string) => {
      const select = document.createElement("select");
      select.dataset.role = role;
      for (const cue of eligible) {
        const option = document.createElement("option");
        option.value = cue.id;
        option.textContent = `${cue.id} ${cue.label}`;
        select.appendChild(option);
      }
      return select;
    };
    const cueA = pickCue("cue-a");
    const cueB = pickCue("cue-b");
    const picker = document.createElement("select");
    picker.dataset.role = "combine-kind";
    for (const kind of COMBINATION_KINDS) {
      const option = document.createElement("option");
      option.value = kind;
      option.textContent = kind.replace(/_/g, " ");
      picker.appendChild(option);
    }
    const fire = document.createElement("button");
    fire.type = "button";
    fire.dataset.role = "fire-combine";
    fire.textContent = "combine";
    const enabled = this.composerEnabled() && eligible.length >= 2;
    for (const el of [cueA, cueB, picker, fire]) el.disabled = !enabled;
    fire.addEventListener("click", () => {
      void this.fireCombine(cueA.value, cueB.value, picker.value);
    });
    form.append(cueA, cueB, picker, fire);
    return form;
  }

  private renderPrompt(promptId: string): HTMLElement {
    const view = this.view!;
    const prompt = view.prompts.find((p) => p.id === promptId);
    const block = document.createElement("article");
    block.className = "prompt";
    if (!prompt) return block;
    block.dataset.promptId = prompt.id;
    const question = document.createElement("p");
    question.className = "prompt-text";
    question.textContent = prompt.text;
    const status = document.createElement("span");
    status.className = prompt.answered ? "status status-answered" : "status status-waiting";
    status.textContent = prompt.answered ? "answered" : "waiting";
    block.append(question, status);

    const response = view.responses.find((r) => r.prompt_id === prompt.id);
    if (response) {
      if (response.broad_statement) {
        const broad = document.createElement("p");
        broad.className = "response-broad";
        broad.textContent = response.broad_statement;
        block.appendChild(broad);
      }
      const items = document.createElement("ol");
      items.className = "response-items";
      for (const cueId of response.cue_ids) {
        const cue = view.cues.find((c) => c.id === cueId);
        if (!cue) continue;
        const li = document.createElement("li");
        li.dataset.cueId = cue.id;
        li.textContent = `${cue.label}: ${cue.body}`;
        items.appendChild(li);
      }
      block.appendChild(items);
      if (response.summary) {
        const summary = document.createElement("p");
        summary.className = "response-summary";
        summary.textContent = response.summary;
        block.appendChild(summary);
      }
    }
    return block;
  }

  private async fireDetail(threadId: string, kind: string, cueText: string): Promise<void> {
    try {
      await this.api.detail(this.sessionId, threadId, kind, cueText || undefined);
      await this.onChange();
    } catch (err) {
      this.onError(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    }
  }

  private async fireCombine(cueA: string, cueB: string, kind: string): Promise<void> {
    try {
      await this.api.combine(this.sessionId, cueA, cueB, kind);
      await this.onChange();
    } catch (err) {
      this.onError(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
    }
  }
}
