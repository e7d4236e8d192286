/** One observable state bag. Server truth lives in `envelope` and is only
 * replaced by API responses; everything else is transient UI state. */

import type { Criterion, Envelope, EventRecord, TierName } from "./types.js";

export interface AppState {
  envelope: Envelope | null;
  events: EventRecord[] | null;
  busy: boolean;
  error: string | null;
  timelineOpen: boolean;
  dragId: string | null;
  /** criterion id -> tier shown while the confirming request is in flight */
  optimisticTiers: Record<string, TierName>;
  exportText: string | null;
  exportFormat: "markdown" | "json";
}

const initial: AppState = {
  envelope: null,
  events: null,
  busy: false,
  error: null,
  timelineOpen: false,
  dragId: null,
  optimisticTiers: {},
  exportText: null,
  exportFormat: "markdown",
};

type Listener = () => void;

function createStore(start: AppState) {
  let state = { ...start };
  const listeners = new Set<Listener>();
  return {
    get(): AppState {
      return state;
    },
    set(patch: Partial<AppState>): void {
      state = { ...state, ...patch };
      listeners.forEach((fn) => fn());
    },
    reset(): void {
      state = { ...start };
      listeners.forEach((fn) => fn());
    },
    subscribe(fn: Listener): () => void {
      listeners.add(fn);
      return () => listeners.delete(fn);
    },
  };
}

export const store = createStore(initial);

/** Active criteria with in-flight tier moves applied on top of server truth. */
export function viewCriteria(state: AppState): Criterion[] {
  if (!state.envelope) return [];
  return state.envelope.session.criteria
    .filter((c) => c.active)
    .map((c) => {
      const pending = state.optimisticTiers[c.id];
      return pending === undefined ? c : { ...c, tier: pending };
    });
}
