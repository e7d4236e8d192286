import type { Actions } from "../app.js";
import type { AppState } from "../store.js";

/** Two-question intake form. The prompts are the product's fixed copy. */
export function renderDescribe(root: HTMLElement, state: AppState, actions: Actions): void {
  const form = document.createElement("form");
  form.className = "describe-form";

  const decisionField = textareaField(
    "decision-text",
    "What decision do you need help with?",
    state.envelope?.session.framing.decision_text ?? "",
  );
  const idealField = textareaField(
    "ideal-text",
    "Think about your ideal options. What do they all share?",
    state.envelope?.session.framing.ideal_qualities_text ?? "",
  );

  const submit = document.createElement("button");
  submit.type = "submit";
  submit.className = "primary";
  submit.dataset.testid = "framing-submit";
  submit.textContent = "Start the loop";
  submit.disabled = state.busy;

  form.append(decisionField.wrapper, idealField.wrapper, submit);
  form.addEventListener("submit", (event) => {
    event.preventDefault();
    const decision = decisionField.input.value.trim();
    if (!decision) {
      decisionField.input.focus();
      return;
    }
    void actions.startSession(decision, idealField.input.value.trim());
  });

  root.appendChild(form);
}

function textareaField(id: string, label: string, value: string) {
  const wrapper = document.createElement("div");
  wrapper.className = "field";
  const labelEl = document.createElement("label");
  labelEl.htmlFor = id;
  labelEl.textContent = label;
  const input = document.createElement("textarea");
  input.id = id;
  input.rows = 3;
  input.value = value;
  wrapper.append(labelEl, input);
  return { wrapper, input };
}
