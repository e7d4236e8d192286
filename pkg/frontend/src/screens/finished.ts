import type { Actions } from "../app.js";
import type { AppState } from "../store.js";

/** Export view: the finished criteria document, markdown or JSON. */
export function renderFinished(root: HTMLElement, state: AppState, actions: Actions): void {
  const box = document.createElement("div");
  box.className = "export-view";
  box.dataset.testid = "export-view";

  const bar = document.createElement("div");
  bar.className = "format-bar";
  for (const format of ["markdown", "json"] as const) {
    const button = document.createElement("button");
    button.textContent = format;
    button.dataset.testid = `export-${format}`;
    if (state.exportFormat === format && state.exportText !== null) {
      button.classList.add("active");
    }
    button.addEventListener("click", () => void actions.loadExport(format));
    bar.appendChild(button);
  }
  box.appendChild(bar);

  const pre = document.createElement("pre");
  pre.className = "export-text";
  pre.dataset.testid = "export-text";
  if (state.exportText === null) {
    pre.textContent = "Loading…";
    // First render after finishing: pull the default format once.
    void actions.loadExport(state.exportFormat);
  } else {
    pre.textContent = state.exportText;
  }
  box.appendChild(pre);
  root.appendChild(box);
}
