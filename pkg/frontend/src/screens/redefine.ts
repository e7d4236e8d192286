import type { Actions } from "../app.js";
import { viewCriteria, type AppState } from "../store.js";
import type { Criterion, Definition } from "../types.js";

const TIER_SHORT: Record<string, string> = {
  must_have: "must",
  should_have: "should",
  could_have: "could",
  unassigned: "—",
};

/** Per-criterion definition chips. Selecting is a multi-select; each click
 * re-submits the criterion's full selected set so server truth stays the
 * only source. The finish affordance lives here, at the natural loop exit. */
export function renderRedefine(root: HTMLElement, state: AppState, actions: Actions): void {
  const intro = document.createElement("p");
  intro.className = "hint";
  intro.textContent =
    "Pick the definitions you actually mean; the second half of each list is deliberately provocative. Add your own wording if none fit.";
  root.appendChild(intro);

  for (const criterion of viewCriteria(state)) {
    if (criterion.definitions.length === 0) continue;
    root.appendChild(criterionSection(criterion, state, actions));
  }

  const bar = document.createElement("div");
  bar.className = "confirm-bar";
  const again = document.createElement("button");
  again.dataset.testid = "next-round";
  again.textContent = "Another round of options";
  again.disabled = state.busy;
  again.addEventListener("click", () => void actions.confirmRedefinition(false));

  const finish = document.createElement("button");
  finish.className = "primary";
  finish.dataset.testid = "finish";
  finish.textContent = "I'm confident in these criteria";
  finish.disabled = state.busy;
  finish.addEventListener("click", () => void actions.confirmRedefinition(true));

  bar.append(again, finish);
  root.appendChild(bar);
}

function criterionSection(criterion: Criterion, state: AppState, actions: Actions): HTMLElement {
  const section = document.createElement("section");
  section.className = "redefine-criterion";
  section.dataset.criterionId = criterion.id;

  const heading = document.createElement("h3");
  heading.textContent = criterion.label;
  const tier = document.createElement("span");
  tier.className = `badge tier-${criterion.tier}`;
  tier.textContent = TIER_SHORT[criterion.tier] ?? criterion.tier;
  heading.appendChild(tier);
  section.appendChild(heading);

  const grid = document.createElement("div");
  grid.className = "chip-grid";
  criterion.definitions.forEach((definition) =>
    grid.appendChild(definitionChip(criterion, definition, state, actions)),
  );
  section.appendChild(grid);

  section.appendChild(customDefinitionRow(criterion, state, actions));
  return section;
}

function definitionChip(
  criterion: Criterion,
  definition: Definition,
  state: AppState,
  actions: Actions,
): HTMLElement {
  const chip = document.createElement("button");
  chip.type = "button";
  chip.className = `chip definition-chip flavor-${definition.flavor}`;
  if (definition.selected) chip.classList.add("selected");
  chip.dataset.definitionId = definition.id;
  chip.setAttribute("aria-pressed", definition.selected ? "true" : "false");
  chip.textContent = definition.text;
  chip.disabled = state.busy;
  chip.addEventListener("click", () => {
    const selected = new Set(
      criterion.definitions.filter((d) => d.selected).map((d) => d.id),
    );
    if (selected.has(definition.id)) {
      selected.delete(definition.id);
    } else {
      selected.add(definition.id);
    }
    void actions.setSelections(criterion.id, [...selected]);
  });
  return chip;
}

function customDefinitionRow(
  criterion: Criterion,
  state: AppState,
  actions: Actions,
): HTMLElement {
  const row = document.createElement("form");
  row.className = "add-row";
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = `What does "${criterion.label}" mean to you?`;
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = "Add definition";
  button.disabled = state.busy;
  row.append(input, button);
  row.addEventListener("submit", (event) => {
    event.preventDefault();
    const text = input.value.trim();
    if (text) void actions.addCustomDefinition(criterion.id, text);
  });
  return row;
}
