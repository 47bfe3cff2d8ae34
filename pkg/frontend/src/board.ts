/**
 * Triage board: four columns of cue cards kept in lockstep with the
 * server's session view. The server is the single source of truth; a
 * drag (or column button) fires the triage call optimistically and the
 * card snaps back if the server refuses.
 */
import { ApiClient, ApiError } from "./api.js";
import type { ApiSessionView, TriageCategory } from "./types.js";

export type Column = "unassigned" | TriageCategory;

export const COLUMNS: Column[] = ["unassigned", "explore", "evaluate", "ignore"];

export interface CueCard {
  id: string;
  label: string;
  body: string;
  sourcePrompt: string;
  score: number | null;
}

export interface TriageBoardModel {
  columns: Record<Column, CueCard[]>;
  dragging: string | null;
}

// Small stopword list for the presentational overlap score. The score is
// derived from server data on the fly and never sent back.
const STOP = new Set(
  (
    "a about above after again all an and any are as at be because been " +
    "before being between both but by could did do does doing down during " +
    "each few for from further had has have having he her here hers him his " +
    "how i if in into is it its just me more most my no nor not of off on " +
    "once only or other our out over own same she should so some such than " +
    "that the their them then there these they this those through to too " +
    "under until up very was we were what when where which while who whom " +
    "why will with you your"
  ).split(" "),
);

export function contentWords(text: string): Set<string> {
  const words = new Set<string>();
  for (const match of text.toLowerCase().matchAll(/[a-z0-9']+/g)) {
    const word = match[0].replace(/'/g, "");
    if (word && !STOP.has(word)) words.add(word);
  }
  return words;
}

function jaccard(a: Set<string>, b: Set<string>): number {
  if (a.size === 0 && b.size === 0) return 0;
  let shared = 0;
  for (const word of a) if (b.has(word)) shared += 1;
  const union = a.size + b.size - shared;
  return union === 0 ? 0 : shared / union;
}

/** Best overlap of one cue against the evaluation cues' texts. */
export function overlapScore(cueText: string, evaluationTexts: string[]): number {
  const words = contentWords(cueText);
  let best = 0;
  for (const evalText of evaluationTexts) {
    best = Math.max(best, jaccard(words, contentWords(evalText)));
  }
  return best;
}

export function boardFromView(view: ApiSessionView): TriageBoardModel {
  const columns: Record<Column, CueCard[]> = {
    unassigned: [],
    explore: [],
    evaluate: [],
    ignore: [],
  };
  const evaluationTexts = view.cues
    .filter((c) => c.triage === "evaluate")
    .map((c) => `${c.label} ${c.body}`);
  for (const cue of view.cues) {
    const column: Column = cue.triage ?? "unassigned";
    const scorable = column === "unassigned" || column === "explore";
    columns[column].push({
      id: cue.id,
      label: cue.label,
      body: cue.body,
      sourcePrompt: `PROMPT${cue.prompt_ordinal}`,
      score:
        scorable && evaluationTexts.length > 0
          ? overlapScore(`${cue.label} ${cue.body}`, evaluationTexts)
          : null,
    });
  }
  return { columns, dragging: null };
}

/** Cue ids per column as rendered in the DOM; the e2e compares this
 *  against boardFromView of a fresh server fetch. */
export function readBoard(container: HTMLElement): Record<Column, string[]> {
  const out = { unassigned: [], explore: [], evaluate: [], ignore: [] } as Record<
    Column,
    string[]
  >;
  for (const column of COLUMNS) {
    const cards = container.querySelectorAll(`[data-column="${column}"] [data-cue-id]`);
    out[column] = Array.from(cards).map((el) => (el as HTMLElement).dataset.cueId ?? "");
  }
  return out;
}

export class TriageBoard {
  model: TriageBoardModel = {
    columns: { unassigned: [], explore: [], evaluate: [], ignore: [] },
    dragging: null,
  };

  constructor(
    private api: ApiClient,
    private sessionId: string,
    private container: HTMLElement,
    private onError: (message: string) => void = () => {},
  ) {}

  async sync(): Promise<void> {
    const view = await this.api.getSession(this.sessionId);
    this.model = boardFromView(view);
    this.render();
  }

  setFromView(view: ApiSessionView): void {
    this.model = boardFromView(view);
    this.render();
  }

  private findColumn(cueId: string): Column | null {
    for (const column of COLUMNS) {
      if (this.model.columns[column].some((c) => c.id === cueId)) return column;
    }
    return null;
  }

  /**
   * Move a card to a triage column. No-op when the card is already
   * there; optimistic otherwise, with snap-back plus resync on refusal.
   */
  async move(cueId: string, target: TriageCategory): Promise<void> {
    const from = this.findColumn(cueId);
    if (from === null || from === target) return;
    const snapshot = this.model;
    const card = snapshot.columns[from].find((c) => c.id === cueId)!;
    this.model = {
      dragging: null,
      columns: {
        ...snapshot.columns,
        [from]: snapshot.columns[from].filter((c) => c.id !== cueId),
        [target]: [...snapshot.columns[target], card],
      },
    };
    this.render();
    try {
      await this.api.triage(this.sessionId, cueId, target);
      await this.sync();
    } catch (err) {
      this.model = snapshot;
      this.render();
      this.onError(err instanceof ApiError ? `${err.code}: ${err.message}` : String(err));
      if (err instanceof ApiError && err.code !== "network") {
        await this.sync().catch(() => {});
      }
    }
  }

  render(): void {
    this.container.textContent = "";
    for (const column of COLUMNS) {
      const section = document.createElement("section");
      section.className = "board-column";
      section.dataset.column = column;
      const heading = document.createElement("h3");
      heading.textContent = column;
      section.appendChild(heading);
      section.addEventListener("dragover", (event) => event.preventDefault());
      section.addEventListener("drop", (event) => {
        event.preventDefault();
        if (this.model.dragging && column !== "unassigned") {
          void this.move(this.model.dragging, column);
        }
        this.model.dragging = null;
      });
      const list = document.createElement("ul");
      for (const card of this.model.columns[column]) {
        list.appendChild(this.renderCard(card, column));
      }
      section.appendChild(list);
      this.container.appendChild(section);
    }
  }

  private renderCard(card: CueCard, column: Column): HTMLElement {
    const item = document.createElement("li");
    item.className = "cue-card";
    item.dataset.cueId = card.id;
    item.draggable = true;
    item.addEventListener("dragstart", () => {
      this.model.dragging = card.id;
    });

    const label = document.createElement("strong");
    label.textContent = card.label;
    const body = document.createElement("p");
    body.textContent = card.body;
    const source = document.createElement("span");
    source.className = "card-source";
    source.textContent = card.sourcePrompt;
    item.append(label, body, source);

    if (card.score !== null) {
      const score = document.createElement("span");
      score.className = "card-score";
      score.dataset.score = card.score.toFixed(2);
      score.textContent = `overlap ${card.score.toFixed(2)}`;
      item.appendChild(score);
    }

    const actions = document.createElement("span");
    actions.className = "card-actions";
    for (const target of ["explore", "evaluate", "ignore"] as TriageCategory[]) {
      if (target === column) continue;
      const button = document.createElement("button");
      button.type = "button";
      button.dataset.moveTo = target;
      button.textContent = target;
      button.addEventListener("click", () => void this.move(card.id, target));
      actions.appendChild(button);
    }
    item.appendChild(actions);
    return item;
  }
}
