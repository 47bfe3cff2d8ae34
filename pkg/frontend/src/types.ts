// Wire types for the exploration service. Field names mirror the JSON
// payloads exactly; nothing here is invented client-side.

export type SessionState =
  | "awaiting_critique"
  | "triage_pending"
  | "thread_open"
  | "rewrite_pending"
  | "done";

export type TriageCategory = "explore" | "evaluate" | "ignore";

export interface ApiCue {
  id: string;
  label: string;
  body: string;
  response_id: string;
  prompt_ordinal: number;
  item_index: number;
  triage: TriageCategory | null;
  triage_seq: number | null;
  thread_id: string | null;
  selected_in: string | null;
}

export interface ApiPrompt {
  id: string;
  ordinal: number;
  kind: string;
  thread_id: string | null;
  text: string;
  answered: boolean;
  response_id: string | null;
}

export interface ApiResponse {
  id: string;
  prompt_id: string;
  text: string;
  broad_statement: string;
  summary: string;
  cue_ids: string[];
}

export interface ApiThread {
  id: string;
  root_cue_id: string;
  status: string;
  prompt_ids: string[];
  selected_cue_ids: string[];
}

export interface ApiRevision {
  revision: number;
  paragraph: string;
}

export interface ApiSessionView {
  id: string;
  client: string;
  state: SessionState;
  revisions: ApiRevision[];
  prompts: ApiPrompt[];
  responses: ApiResponse[];
  cues: ApiCue[];
  threads: ApiThread[];
  annotations: Record<string, string>;
  events: { seq: number; tick: number; action: string; data: unknown }[];
}

export interface ApiConcept {
  id: string;
  label: string;
  origin: string;
  cluster: string | null;
  attributes: { text: string; polarity: string }[];
}

export interface ApiRelationship {
  source: string;
  target: string;
  kind: string;
  explicitness: "explicit" | "implied";
}

export interface ApiGraph {
  concepts: ApiConcept[];
  relationships: ApiRelationship[];
}

export interface InconsistencyFinding {
  pair: [string, string];
  severity: string;
  conflicts: {
    source_attribute: string;
    source_polarity: string;
    target_attribute: string;
    target_polarity: string;
  }[];
}

export interface ApiMetrics {
  concept_count: number;
  paths: {
    path_count: number;
    length_histogram: Record<string, number>;
    max_depth: number;
    breadth: number;
    paths: string[][];
  };
  centrality: { concept: string; degree: number }[];
  clusters: Record<string, number>;
  unconnected: { isolated: string[]; implied_only_bridges: [string, string][] };
  unexplored: { unanchored_llm: string[]; author_without_llm: string[] };
  idea_flow: { threshold: number; chains: string[][]; flagged: string[][] };
  // produced by offline analysis when an analogy map is supplied; the
  // service itself never sends this section
  inconsistencies?: InconsistencyFinding[];
}

export interface JobTicket {
  job_id: string;
  status: string;
  result: Record<string, unknown> | null;
}
