/** Collapsible history strip: every event in order, user actions and
 * engine installs told apart by origin, with a branch affordance that
 * forks a new session at that point and navigates into it. */

import type { Actions } from "./app.js";
import type { AppState } from "./store.js";
import type { EventRecord } from "./types.js";

const ENGINE_KINDS = new Set(["options_installed", "criteria_installed", "definitions_installed"]);

const KIND_LABELS: Record<string, string> = {
  session_created: "session started",
  framing_submitted: "decision described",
  options_installed: "options dealt",
  option_toggled: "card toggled",
  custom_option_added: "own card added",
  narrowing_confirmed: "narrowed to three",
  criteria_installed: "criteria proposed",
  tier_set: "tier assigned",
  criterion_added: "own criterion added",
  criterion_removed: "criterion retired",
  prioritization_confirmed: "tiers locked",
  definitions_installed: "definitions offered",
  definitions_selected: "definitions chosen",
  redefinition_confirmed: "next round",
  session_finished: "finished",
  session_branched: "branched here",
};

export function renderTimeline(root: HTMLElement, state: AppState, actions: Actions): void {
  const section = document.createElement("section");
  section.className = "timeline";

  const toggle = document.createElement("button");
  toggle.className = "timeline-toggle";
  toggle.dataset.testid = "timeline-toggle";
  toggle.setAttribute("aria-expanded", state.timelineOpen ? "true" : "false");
  toggle.textContent = state.timelineOpen ? "Hide history" : "Show history";
  toggle.addEventListener("click", () => void actions.toggleTimeline());
  section.appendChild(toggle);

  if (state.timelineOpen) {
    const list = document.createElement("ol");
    list.className = "timeline-list";
    for (const event of state.events ?? []) {
      list.appendChild(timelineItem(event, state, actions));
    }
    section.appendChild(list);
  }
  root.appendChild(section);
}

function timelineItem(event: EventRecord, state: AppState, actions: Actions): HTMLElement {
  const origin = ENGINE_KINDS.has(event.kind) ? "engine" : "you";
  const item = document.createElement("li");
  item.className = `timeline-item origin-${origin}`;
  item.dataset.seq = String(event.seq);

  const badge = document.createElement("span");
  badge.className = "badge origin";
  badge.textContent = origin;
  const label = document.createElement("span");
  label.className = "timeline-label";
  label.textContent = `${event.seq}. ${KIND_LABELS[event.kind] ?? event.kind}`;

  const branchBtn = document.createElement("button");
  branchBtn.className = "branch";
  branchBtn.dataset.testid = "branch-button";
  branchBtn.textContent = "branch";
  branchBtn.title = "fork a new session from this point";
  branchBtn.disabled = state.busy;
  branchBtn.addEventListener("click", () => void actions.branchAt(event.seq));

  item.append(badge, label, branchBtn);
  return item;
}
