import type { Actions } from "../app.js";
import type { AppState } from "../store.js";

const WAIT_COPY: Record<string, string> = {
  awaiting_options: "Generating option cards…",
  awaiting_criteria: "Inferring criteria from what you kept…",
  awaiting_definitions: "Writing alternative definitions…",
};

/** Progress indicator while the server generates; polling happens in the
 * app shell. A parked failure shows here with an inline retry. */
export function renderWaiting(root: HTMLElement, state: AppState, actions: Actions): void {
  const envelope = state.envelope;
  if (!envelope) return;

  const box = document.createElement("div");
  box.className = "waiting";
  box.dataset.testid = "waiting";

  if (envelope.generation_error) {
    box.classList.add("failed");
    const message = document.createElement("p");
    message.textContent = "Generation failed: " + envelope.generation_error.message;
    const retry = document.createElement("button");
    retry.className = "primary";
    retry.dataset.testid = "retry-generation";
    retry.textContent = "Try again";
    retry.disabled = state.busy;
    retry.addEventListener("click", () => void actions.retryGeneration());
    box.append(message, retry);
  } else {
    const spinner = document.createElement("div");
    spinner.className = "spinner";
    spinner.setAttribute("aria-hidden", "true");
    const message = document.createElement("p");
    message.setAttribute("role", "status");
    message.textContent = WAIT_COPY[envelope.session.phase.kind] ?? "Working…";
    box.append(spinner, message);
  }
  root.appendChild(box);
}
