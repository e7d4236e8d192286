/** Screen flow and the action layer.
 *
 * Screens render purely from store state and call back through `actions`;
 * every mutation goes to the server and the response envelope replaces
 * local truth wholesale. The app never enforces workflow rules itself --
 * it only gates affordances (disabled buttons) on what the server said. */

import { api, ApiError } from "./api.js";
import { messageFor } from "./errors.js";
import { store, type AppState } from "./store.js";
import type { AssignableTier, Envelope, OptionCard } from "./types.js";
import { renderDescribe } from "./screens/describe.js";
import { renderFinished } from "./screens/finished.js";
import { renderNarrow } from "./screens/narrow.js";
import { renderPrioritize } from "./screens/prioritize.js";
import { renderRedefine } from "./screens/redefine.js";
import { renderWaiting } from "./screens/waiting.js";
import { renderTimeline } from "./timeline.js";

export interface Actions {
  startSession(decision: string, ideal: string): Promise<void>;
  toggleCard(card: OptionCard): Promise<void>;
  addCard(text: string): Promise<void>;
  confirmNarrowing(): Promise<void>;
  assignTier(criterionId: string, tier: AssignableTier): Promise<void>;
  addCriterion(label: string): Promise<void>;
  removeCriterion(criterionId: string): Promise<void>;
  confirmPrioritization(): Promise<void>;
  setSelections(criterionId: string, selectedIds: string[]): Promise<void>;
  addCustomDefinition(criterionId: string, text: string): Promise<void>;
  confirmRedefinition(finish: boolean): Promise<void>;
  retryGeneration(): Promise<void>;
  toggleTimeline(): Promise<void>;
  branchAt(seq: number): Promise<void>;
  loadExport(format: "markdown" | "json"): Promise<void>;
  refresh(): Promise<void>;
}

function sessionId(): string {
  const envelope = store.get().envelope;
  if (!envelope) throw new Error("no session yet");
  return envelope.session.id;
}

/** Serialize mutations: at most one in flight, errors land on the banner. */
async function mutate(run: () => Promise<Envelope>): Promise<void> {
  if (store.get().busy) return;
  store.set({ busy: true });
  try {
    const envelope = await run();
    store.set({ envelope, error: null, optimisticTiers: {} });
    if (store.get().timelineOpen) await loadEvents();
  } catch (err) {
    store.set({ error: messageFor(err), optimisticTiers: {} });
  } finally {
    store.set({ busy: false });
  }
}

async function loadEvents(): Promise<void> {
  const envelope = store.get().envelope;
  if (!envelope) return;
  try {
    const result = await api.getEvents(envelope.session.id);
    store.set({ events: result.events });
  } catch (err) {
    store.set({ error: messageFor(err) });
  }
}

function setHash(id: string): void {
  if (typeof location !== "undefined") {
    location.hash = `#s=${id}`;
  }
}

export const actions: Actions = {
  async startSession(decision, ideal) {
    await mutate(async () => {
      let envelope = store.get().envelope;
      if (!envelope) {
        envelope = await api.createSession();
        store.set({ envelope });
        setHash(envelope.session.id);
      }
      return api.submitFraming(envelope.session.id, decision, ideal);
    });
  },

  async toggleCard(card) {
    // The card button toggles between keep and remove; undecided counts as
    // not kept, so the first press always keeps.
    const next = card.status === "kept" ? "removed" : "kept";
    await mutate(() => api.setOptionStatus(sessionId(), card.id, next));
  },

  async addCard(text) {
    await mutate(() => api.addOption(sessionId(), text));
  },

  async confirmNarrowing() {
    await mutate(() => api.confirmNarrowing(sessionId()));
  },

  async assignTier(criterionId, tier) {
    // Optimistic: the chip moves immediately, the response (or the error
    // rollback) reconciles with server truth.
    store.set({ optimisticTiers: { ...store.get().optimisticTiers, [criterionId]: tier } });
    await mutate(() => api.setTier(sessionId(), criterionId, tier));
  },

  async addCriterion(label) {
    await mutate(() => api.addCriterion(sessionId(), label));
  },

  async removeCriterion(criterionId) {
    await mutate(() => api.removeCriterion(sessionId(), criterionId));
  },

  async confirmPrioritization() {
    await mutate(() => api.confirmPrioritization(sessionId()));
  },

  async setSelections(criterionId, selectedIds) {
    await mutate(() => api.selectDefinitions(sessionId(), criterionId, selectedIds));
  },

  async addCustomDefinition(criterionId, text) {
    const envelope = store.get().envelope;
    const criterion = envelope?.session.criteria.find((c) => c.id === criterionId);
    const keep = criterion ? criterion.definitions.filter((d) => d.selected).map((d) => d.id) : [];
    await mutate(() => api.selectDefinitions(sessionId(), criterionId, keep, [text]));
  },

  async confirmRedefinition(finish) {
    await mutate(() => api.confirmRedefinition(sessionId(), finish));
  },

  async retryGeneration() {
    await mutate(() => api.retryGeneration(sessionId()));
    // A failed retry leaves the parked error on the server envelope; pull it
    // so the waiting screen shows the current failure, not a stale one.
    if (store.get().error !== null) {
      await actions.refresh();
    }
  },

  async toggleTimeline() {
    const open = !store.get().timelineOpen;
    store.set({ timelineOpen: open });
    if (open && store.get().events === null) {
      await loadEvents();
    }
  },

  async branchAt(seq) {
    await mutate(() => api.branch(sessionId(), seq));
    const envelope = store.get().envelope;
    if (envelope) {
      setHash(envelope.session.id);
      store.set({ events: null });
      if (store.get().timelineOpen) await loadEvents();
    }
  },

  async loadExport(format) {
    try {
      const text = await api.exportDocument(sessionId(), format);
      store.set({ exportText: text, exportFormat: format, error: null });
    } catch (err) {
      store.set({ error: messageFor(err) });
    }
  },

  async refresh() {
    const envelope = store.get().envelope;
    if (!envelope) return;
    try {
      store.set({ envelope: await api.getState(envelope.session.id) });
    } catch (err) {
      store.set({ error: messageFor(err) });
    }
  },
};

/** Load an existing session (deep link / reload) into the store. */
export async function boot(id: string | null): Promise<void> {
  if (id === null) return;
  try {
    store.set({ envelope: await api.getState(id), error: null });
  } catch (err) {
    if (err instanceof ApiError && err.code === "unknown-session") {
      setHash("");
      store.set({ envelope: null, error: null });
      return;
    }
    store.set({ error: messageFor(err) });
  }
}

// ---------------------------------------------------------------------------
// Polling: 1 s while the server is generating, off otherwise.
// ---------------------------------------------------------------------------

export const POLL_INTERVAL_MS = 1000;
let pollTimer: ReturnType<typeof setInterval> | null = null;

function syncPolling(): void {
  const pending = store.get().envelope?.pending_generation ?? false;
  if (pending && pollTimer === null) {
    pollTimer = setInterval(() => void actions.refresh(), POLL_INTERVAL_MS);
  } else if (!pending && pollTimer !== null) {
    clearInterval(pollTimer);
    pollTimer = null;
  }
}

function stopPolling(): void {
  if (pollTimer !== null) {
    clearInterval(pollTimer);
    pollTimer = null;
  }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

const STEP_TITLES: Record<string, string> = {
  describing: "Describe Decision",
  awaiting_options: "Narrow Options",
  narrowing: "Narrow Options",
  awaiting_criteria: "Prioritize",
  prioritizing: "Prioritize",
  awaiting_definitions: "Redefine",
  redefining: "Redefine",
  finished: "Your criteria",
};

function renderHeader(root: HTMLElement, state: AppState): void {
  const header = document.createElement("header");
  header.className = "app-header";
  const title = document.createElement("h1");
  title.textContent = "criteria-loop";
  header.appendChild(title);

  if (state.envelope) {
    const { phase, id } = { phase: state.envelope.session.phase, id: state.envelope.session.id };
    const step = document.createElement("span");
    step.className = "phase-badge";
    step.dataset.phase = phase.kind;
    step.textContent = `${STEP_TITLES[phase.kind] ?? phase.kind} · round ${phase.round}`;
    header.appendChild(step);

    const sid = document.createElement("span");
    sid.className = "session-id";
    sid.title = "session id";
    sid.textContent = id.slice(0, 8);
    header.appendChild(sid);
  }
  root.appendChild(header);
}

function renderError(root: HTMLElement, state: AppState): void {
  if (!state.error) return;
  const banner = document.createElement("div");
  banner.className = "banner error";
  banner.setAttribute("role", "alert");
  banner.textContent = state.error;
  const dismiss = document.createElement("button");
  dismiss.className = "dismiss";
  dismiss.textContent = "×";
  dismiss.setAttribute("aria-label", "dismiss");
  dismiss.addEventListener("click", () => store.set({ error: null }));
  banner.appendChild(dismiss);
  root.appendChild(banner);
}

function renderScreen(root: HTMLElement, state: AppState): void {
  const main = document.createElement("main");
  main.className = "screen";
  root.appendChild(main);

  const envelope = state.envelope;
  if (!envelope || envelope.session.phase.kind === "describing") {
    renderDescribe(main, state, actions);
    return;
  }
  switch (envelope.session.phase.kind) {
    case "awaiting_options":
    case "awaiting_criteria":
    case "awaiting_definitions":
      renderWaiting(main, state, actions);
      break;
    case "narrowing":
      renderNarrow(main, state, actions);
      break;
    case "prioritizing":
      renderPrioritize(main, state, actions);
      break;
    case "redefining":
      renderRedefine(main, state, actions);
      break;
    case "finished":
      renderFinished(main, state, actions);
      break;
  }
}

function renderApp(root: HTMLElement): void {
  const state = store.get();
  root.innerHTML = "";
  renderHeader(root, state);
  renderError(root, state);
  renderScreen(root, state);
  if (state.envelope) {
    renderTimeline(root, state, actions);
  }
}

/** Mount the app; returns an unmount function. */
export function mountApp(root: HTMLElement): () => void {
  const rerender = () => renderApp(root);
  const unsubRender = store.subscribe(rerender);
  const unsubPoll = store.subscribe(syncPolling);
  rerender();
  syncPolling();
  return () => {
    unsubRender();
    unsubPoll();
    stopPolling();
    root.innerHTML = "";
  };
}
