/** Hand-built envelope fixtures and a fetch stub for unit tests.
 * The e2e suite talks to a real server instead of these. */

import type {
  Criterion,
  Definition,
  Envelope,
  OptionCard,
  OptionStatus,
  PhaseKind,
  SessionConfig,
  TierName,
} from "../src/types.js";

export function makeConfig(): SessionConfig {
  return {
    options_per_round: 8,
    keep_target: 3,
    max_inferred_criteria: 6,
    definitions_per_criterion: 8,
    provider: "stub",
    seed: 0,
  };
}

export function makeCard(index: number, status: OptionStatus = "undecided"): OptionCard {
  return {
    id: `card-${index}`,
    text: `option number ${index}`,
    origin: "generated",
    round: 1,
    status,
    strategy: "assumption_test",
  };
}

export function makeCriterion(
  index: number,
  tier: TierName = "unassigned",
  definitions: Definition[] = [],
): Criterion {
  return {
    id: `crit-${index}`,
    label: `criterion ${index}`,
    origin: "inferred",
    tier,
    active: true,
    definitions,
    introduced_round: 1,
  };
}

export function makeDefinition(index: number, selected = false): Definition {
  return {
    id: `def-${index}`,
    text: `definition ${index}`,
    flavor: index < 4 ? "common" : "provocative",
    selected,
  };
}

export function makeEnvelope(
  phase: PhaseKind,
  cards: OptionCard[] = [],
  criteria: Criterion[] = [],
): Envelope {
  return {
    session: {
      id: "sess-test",
      config: makeConfig(),
      framing: { decision_text: "pick a path", ideal_qualities_text: "" },
      phase: { kind: phase, round: 1 },
      options: cards.length > 0 ? { "1": cards } : {},
      criteria,
      event_seq: 5,
    },
    lineage: { parent_session_id: null, branch_point_seq: null },
    pending_generation:
      phase === "awaiting_options" || phase === "awaiting_criteria" || phase === "awaiting_definitions",
    generation_error: null,
  };
}

export function narrowingEnvelope(kept: number): Envelope {
  const cards = Array.from({ length: 8 }, (_, i) => makeCard(i, i < kept ? "kept" : "undecided"));
  return makeEnvelope("narrowing", cards);
}

// ---------------------------------------------------------------------------

export interface FakeCall {
  method: string;
  path: string;
  body: unknown;
}

export type FakeRoute = (call: FakeCall) => { status: number; body: unknown } | undefined;

/** Swap globalThis.fetch for a route table; returns calls + restore. */
export function installFakeFetch(route: FakeRoute): { calls: FakeCall[]; restore: () => void } {
  const calls: FakeCall[] = [];
  const original = globalThis.fetch;
  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const call: FakeCall = {
      method: init?.method ?? "GET",
      path: url.replace(/^https?:\/\/[^/]+/, ""),
      body: init?.body ? JSON.parse(String(init.body)) : undefined,
    };
    calls.push(call);
    const matched = route(call) ?? { status: 404, body: { code: "unknown-session", message: "?" } };
    return {
      ok: matched.status < 400,
      status: matched.status,
      statusText: String(matched.status),
      json: async () => matched.body,
      text: async () => (typeof matched.body === "string" ? matched.body : JSON.stringify(matched.body)),
    } as Response;
  }) as typeof fetch;
  return { calls, restore: () => (globalThis.fetch = original) };
}

export async function flush(): Promise<void> {
  for (let i = 0; i < 4; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

/** Stub actions object; every method records its call and resolves. */
export function recordingActions(): { calls: [string, ...unknown[]][]; actions: any } {
  const calls: [string, ...unknown[]][] = [];
  const handler = {
    get(_target: object, name: string) {
      return (...args: unknown[]) => {
        calls.push([name, ...args]);
        return Promise.resolve();
      };
    },
  };
  return { calls, actions: new Proxy({}, handler) };
}
