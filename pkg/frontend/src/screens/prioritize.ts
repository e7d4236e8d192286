import type { Actions } from "../app.js";
import { store, viewCriteria, type AppState } from "../store.js";
import type { AssignableTier, Criterion, TierName } from "../types.js";

const BINS: { tier: AssignableTier; label: string; key: string }[] = [
  { tier: "must_have", label: "must-haves", key: "1" },
  { tier: "should_have", label: "should-haves", key: "2" },
  { tier: "could_have", label: "could-haves", key: "3" },
];

/** Three labeled bins plus an unsorted tray. Chips move by drag-and-drop
 * or by keyboard (1/2/3 assign a tier, Delete retires the criterion). */
export function renderPrioritize(root: HTMLElement, state: AppState, actions: Actions): void {
  const criteria = viewCriteria(state);
  const unassigned = criteria.filter((c) => c.tier === "unassigned");

  const intro = document.createElement("p");
  intro.className = "hint";
  intro.textContent =
    "Sort every criterion into a bin. Drag a chip, or focus it and press 1, 2, or 3.";
  root.appendChild(intro);

  const tray = document.createElement("div");
  tray.className = "tray";
  tray.dataset.testid = "unassigned-tray";
  const trayLabel = document.createElement("h3");
  trayLabel.textContent = unassigned.length > 0 ? "Proposed criteria" : "All sorted";
  tray.appendChild(trayLabel);
  unassigned.forEach((criterion) => tray.appendChild(chip(criterion, state, actions)));
  root.appendChild(tray);

  const bins = document.createElement("div");
  bins.className = "bins";
  for (const bin of BINS) {
    bins.appendChild(renderBin(bin.tier, bin.label, criteria, state, actions));
  }
  root.appendChild(bins);

  root.appendChild(addCriterionRow(state, actions));

  const bar = document.createElement("div");
  bar.className = "confirm-bar";
  const confirm = document.createElement("button");
  confirm.className = "primary";
  confirm.dataset.testid = "prioritize-continue";
  confirm.textContent = "Continue";
  confirm.disabled = state.busy || criteria.length === 0 || unassigned.length > 0;
  if (unassigned.length > 0) {
    confirm.title = "Every criterion needs a tier first.";
  }
  confirm.addEventListener("click", () => void actions.confirmPrioritization());
  bar.appendChild(confirm);
  root.appendChild(bar);
}

function renderBin(
  tier: AssignableTier,
  label: string,
  criteria: Criterion[],
  state: AppState,
  actions: Actions,
): HTMLElement {
  const bin = document.createElement("section");
  bin.className = "bin";
  bin.dataset.tier = tier;
  const heading = document.createElement("h3");
  heading.textContent = label;
  bin.appendChild(heading);

  bin.addEventListener("dragover", (event) => event.preventDefault());
  bin.addEventListener("drop", (event) => {
    event.preventDefault();
    // dataTransfer carries the id in real browsers; the store mirror covers
    // synthetic events in tests.
    const dragged =
      (event as DragEvent).dataTransfer?.getData("text/plain") || store.get().dragId;
    store.set({ dragId: null });
    if (dragged) void actions.assignTier(dragged, tier);
  });

  criteria
    .filter((c) => c.tier === (tier as TierName))
    .forEach((criterion) => bin.appendChild(chip(criterion, state, actions)));
  return bin;
}

function chip(criterion: Criterion, state: AppState, actions: Actions): HTMLElement {
  const el = document.createElement("div");
  el.className = "chip criterion-chip";
  el.dataset.criterionId = criterion.id;
  el.draggable = true;
  el.tabIndex = 0;
  el.setAttribute("role", "button");
  el.setAttribute(
    "aria-label",
    `${criterion.label}; press 1 for must-have, 2 for should-have, 3 for could-have, Delete to retire`,
  );

  const label = document.createElement("span");
  label.textContent = criterion.label;
  el.appendChild(label);

  if (criterion.origin === "user_added") {
    const badge = document.createElement("span");
    badge.className = "badge yours";
    badge.textContent = "yours";
    el.appendChild(badge);
  }

  const remove = document.createElement("button");
  remove.className = "chip-remove";
  remove.textContent = "×";
  remove.setAttribute("aria-label", `retire ${criterion.label}`);
  remove.disabled = state.busy;
  remove.addEventListener("click", (event) => {
    event.stopPropagation();
    void actions.removeCriterion(criterion.id);
  });
  el.appendChild(remove);

  el.addEventListener("dragstart", (event) => {
    store.set({ dragId: criterion.id });
    (event as DragEvent).dataTransfer?.setData("text/plain", criterion.id);
  });
  el.addEventListener("dragend", () => store.set({ dragId: null }));

  el.addEventListener("keydown", (event) => {
    const found = BINS.find((b) => b.key === event.key);
    if (found) {
      event.preventDefault();
      void actions.assignTier(criterion.id, found.tier);
    } else if (event.key === "Delete" || event.key === "Backspace") {
      event.preventDefault();
      void actions.removeCriterion(criterion.id);
    }
  });

  return el;
}

function addCriterionRow(state: AppState, actions: Actions): HTMLElement {
  const row = document.createElement("form");
  row.className = "add-row";
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "Add a criterion of your own…";
  input.dataset.testid = "add-criterion-input";
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = "Add criterion";
  button.disabled = state.busy;
  row.append(input, button);
  row.addEventListener("submit", (event) => {
    event.preventDefault();
    const label = input.value.trim();
    if (label) void actions.addCriterion(label);
  });
  return row;
}
