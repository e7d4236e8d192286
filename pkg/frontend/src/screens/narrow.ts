import type { Actions } from "../app.js";
import { viewCriteria, type AppState } from "../store.js";
import { currentCards, keptCount, type OptionCard } from "../types.js";

const TIER_LABELS: Record<string, string> = {
  must_have: "must-haves",
  should_have: "should-haves",
  could_have: "could-haves",
  unassigned: "unsorted",
};

/** Card grid with keep/remove toggles; continue unlocks at exactly the
 * keep target. Criteria ride along in a read-only sidebar from round 2. */
export function renderNarrow(root: HTMLElement, state: AppState, actions: Actions): void {
  const envelope = state.envelope;
  if (!envelope) return;
  const session = envelope.session;
  const cards = currentCards(session);
  const kept = keptCount(session);
  const target = session.config.keep_target;

  root.classList.add("with-sidebar");
  const content = document.createElement("div");
  content.className = "narrow-content";
  root.appendChild(content);

  const bar = document.createElement("div");
  bar.className = "narrow-bar";
  const counter = document.createElement("span");
  counter.className = "keep-counter";
  counter.dataset.testid = "keep-counter";
  counter.textContent = `${kept} / ${target}`;
  const hint = document.createElement("span");
  hint.className = "hint";
  hint.textContent =
    kept === target ? "Locked in. Continue when ready." : `Keep exactly ${target} options to continue.`;
  const continueBtn = document.createElement("button");
  continueBtn.className = "primary";
  continueBtn.dataset.testid = "narrow-continue";
  continueBtn.textContent = "Continue";
  continueBtn.disabled = kept !== target || state.busy;
  continueBtn.addEventListener("click", () => void actions.confirmNarrowing());
  bar.append(counter, hint, continueBtn);
  content.appendChild(bar);

  const grid = document.createElement("div");
  grid.className = "card-grid";
  cards.forEach((card) => grid.appendChild(renderCard(card, state, actions)));
  content.appendChild(grid);

  content.appendChild(addCardRow(state, actions));

  const criteria = viewCriteria(state);
  if (criteria.length > 0) {
    root.appendChild(criteriaSidebar(criteria));
  }
}

function renderCard(card: OptionCard, state: AppState, actions: Actions): HTMLElement {
  const el = document.createElement("article");
  el.className = `card status-${card.status}`;
  el.dataset.optionId = card.id;

  const text = document.createElement("p");
  text.textContent = card.text;
  el.appendChild(text);

  const meta = document.createElement("div");
  meta.className = "card-meta";
  if (card.origin === "user_authored") {
    const badge = document.createElement("span");
    badge.className = "badge yours";
    badge.textContent = "yours";
    meta.appendChild(badge);
  }
  const toggle = document.createElement("button");
  toggle.className = "toggle";
  toggle.dataset.testid = "card-toggle";
  // One button that toggles between keep and remove.
  toggle.textContent = card.status === "kept" ? "Remove" : "Keep";
  toggle.setAttribute("aria-pressed", card.status === "kept" ? "true" : "false");
  toggle.disabled = state.busy;
  toggle.addEventListener("click", () => void actions.toggleCard(card));
  meta.appendChild(toggle);
  el.appendChild(meta);
  return el;
}

function addCardRow(state: AppState, actions: Actions): HTMLElement {
  const row = document.createElement("form");
  row.className = "add-row";
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "Write your own option…";
  input.dataset.testid = "add-card-input";
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = "Add card";
  button.disabled = state.busy;
  row.append(input, button);
  row.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (text) void actions.addCard(text);
  });
  return row;
}

function criteriaSidebar(criteria: ReturnType<typeof viewCriteria>): HTMLElement {
  const aside = document.createElement("aside");
  aside.className = "criteria-sidebar";
  aside.dataset.testid = "criteria-sidebar";
  const heading = document.createElement("h2");
  heading.textContent = "Your criteria so far";
  aside.appendChild(heading);
  const note = document.createElement("p");
  note.className = "hint";
  note.textContent = "Read-only here; edit them at the prioritize step.";
  aside.appendChild(note);

  for (const tier of ["must_have", "should_have", "could_have", "unassigned"]) {
    const group = criteria.filter((c) => c.tier === tier);
    if (group.length === 0) continue;
    const h = document.createElement("h3");
    h.textContent = TIER_LABELS[tier] ?? tier;
    aside.appendChild(h);
    const ul = document.createElement("ul");
    group.forEach((criterion) => {
      const li = document.createElement("li");
      li.textContent = criterion.label;
      ul.appendChild(li);
    });
    aside.appendChild(ul);
  }
  return aside;
}
