/** Payload shapes served by the moderation service HTTP API. */

export type PromptKind = "longitudinal" | "informational" | "volumetric";
export type ProposedAction = "block_account" | "delete_incoming";
export type PromptStatus = "pending" | "accepted" | "dismissed" | "expired";

export interface IndicatorSummary {
  longitudinal: { prior_abusive_count: number; triggered: boolean };
  informational: {
    originator_info_score: number | null;
    target_info_score: number | null;
    target_share_pct: number | null;
    triggered: boolean;
  };
  volumetric: {
    inbound_count: number;
    baseline: number;
    directionality_pct: number | null;
    triggered: boolean;
  };
  toxicity: number;
}

export interface Prompt {
  prompt_id: string;
  originator_id: string;
  target_id: string;
  originator_handle: string;
  target_handle: string;
  kind: PromptKind;
  message: string;
  proposed_action: ProposedAction;
  event_id: string;
  created_at: string;
  status: PromptStatus;
  decided_at: string | null;
  indicators: IndicatorSummary;
}

export interface PromptList {
  prompts: Prompt[];
}

export interface ActionRecord {
  action_id: string;
  kind: ProposedAction;
  subject: Record<string, unknown>;
  issued_at: string;
  result: "applied" | "simulated" | "failed";
}

export interface DecisionResponse {
  prompt: Prompt;
  action: ActionRecord | null;
}

export interface PairEventRow {
  event_id: string;
  created_at: string;
  toxicity: number;
  direction: "outbound" | "inbound";
}

export interface PairView {
  originator_id: string;
  target_id: string;
  originator_handle: string;
  target_handle: string;
  outbound_count: number;
  inbound_count: number;
  directionality_pct: number | null;
  abusive_count: number;
  events: PairEventRow[];
}

export interface ApiError {
  error: string;
  detail: string;
}
