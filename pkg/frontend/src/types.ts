/** Mirror of the API's projected session state. Server shapes only; all
 * transient UI state lives in the store, never on these objects. */

export type PhaseKind =
  | "describing"
  | "awaiting_options"
  | "narrowing"
  | "awaiting_criteria"
  | "prioritizing"
  | "awaiting_definitions"
  | "redefining"
  | "finished";

export type OptionStatus = "undecided" | "kept" | "removed";
export type OptionOrigin = "generated" | "user_authored";
export type Strategy = "assumption_test" | "align" | "challenge" | "edge_case" | "none";
export type CriterionOrigin = "inferred" | "user_added";
export type TierName = "must_have" | "should_have" | "could_have" | "unassigned";
export type AssignableTier = Exclude<TierName, "unassigned">;
export type DefinitionFlavor = "common" | "provocative" | "user_authored";

export interface OptionCard {
  id: string;
  text: string;
  origin: OptionOrigin;
  round: number;
  status: OptionStatus;
  strategy: Strategy;
}

export interface Definition {
  id: string;
  text: string;
  flavor: DefinitionFlavor;
  selected: boolean;
}

export interface Criterion {
  id: string;
  label: string;
  origin: CriterionOrigin;
  tier: TierName;
  active: boolean;
  definitions: Definition[];
  introduced_round: number;
}

export interface Phase {
  kind: PhaseKind;
  round: number;
}

export interface Framing {
  decision_text: string;
  ideal_qualities_text: string;
}

export interface SessionConfig {
  options_per_round: number;
  keep_target: number;
  max_inferred_criteria: number;
  definitions_per_criterion: number;
  provider: string;
  seed: number;
}

export interface SessionState {
  id: string;
  config: SessionConfig;
  framing: Framing;
  phase: Phase;
  options: Record<string, OptionCard[]>;
  criteria: Criterion[];
  event_seq: number;
}

export interface Lineage {
  parent_session_id: string | null;
  branch_point_seq: number | null;
}

export interface ErrorBody {
  code: string;
  message: string;
  [detail: string]: unknown;
}

export interface Envelope {
  session: SessionState;
  lineage: Lineage;
  pending_generation: boolean;
  generation_error: ErrorBody | null;
}

export interface EventRecord {
  seq: number;
  kind: string;
  payload: Record<string, unknown>;
  timestamp: string;
}

export function currentCards(session: SessionState): OptionCard[] {
  return session.options[String(session.phase.round)] ?? [];
}

export function keptCount(session: SessionState): number {
  return currentCards(session).filter((c) => c.status === "kept").length;
}

export function activeCriteria(session: SessionState): Criterion[] {
  return session.criteria.filter((c) => c.active);
}
