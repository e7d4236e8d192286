import { beforeEach, describe, expect, it } from "vitest";

import { renderRedefine } from "../src/screens/redefine.js";
import { store } from "../src/store.js";
import { makeCriterion, makeDefinition, makeEnvelope, recordingActions } from "./helpers.js";

function mount(selected: number[] = []) {
  const definitions = Array.from({ length: 8 }, (_, i) =>
    makeDefinition(i, selected.includes(i)),
  );
  const criterion = makeCriterion(0, "must_have", definitions);
  store.set({ envelope: makeEnvelope("redefining", [], [criterion]) });
  const root = document.createElement("div");
  const recorder = recordingActions();
  renderRedefine(root, store.get(), recorder.actions);
  return { root, ...recorder };
}

describe("redefine screen", () => {
  beforeEach(() => {
    store.reset();
    document.body.innerHTML = "";
  });

  it("renders a chip per definition, marking flavor and selection", () => {
    const { root } = mount([1]);
    const chips = root.querySelectorAll(".definition-chip");
    expect(chips.length).toBe(8);
    expect(root.querySelectorAll(".definition-chip.selected").length).toBe(1);
    expect(root.querySelectorAll(".definition-chip.flavor-provocative").length).toBe(4);
  });

  it("selecting an unselected chip submits the grown set", () => {
    const { root, calls } = mount([1]);
    root.querySelector<HTMLButtonElement>('[data-definition-id="def-3"]')!.click();
    expect(calls.length).toBe(1);
    const [name, criterionId, ids] = calls[0]!;
    expect(name).toBe("setSelections");
    expect(criterionId).toBe("crit-0");
    expect([...(ids as string[])].sort()).toEqual(["def-1", "def-3"]);
  });

  it("clicking a selected chip submits the shrunken set", () => {
    const { root, calls } = mount([1, 5]);
    root.querySelector<HTMLButtonElement>('[data-definition-id="def-5"]')!.click();
    expect(calls[0]).toEqual(["setSelections", "crit-0", ["def-1"]]);
  });

  it("adds a custom definition for its criterion", () => {
    const { root, calls } = mount();
    const input = root.querySelector<HTMLInputElement>(".add-row input")!;
    input.value = "shows up when it is inconvenient";
    input.form!.dispatchEvent(new Event("submit"));
    expect(calls).toContainEqual([
      "addCustomDefinition",
      "crit-0",
      "shows up when it is inconvenient",
    ]);
  });

  it("offers both loop exits", () => {
    const { root, calls } = mount();
    root.querySelector<HTMLButtonElement>('[data-testid="next-round"]')!.click();
    root.querySelector<HTMLButtonElement>('[data-testid="finish"]')!.click();
    expect(calls).toContainEqual(["confirmRedefinition", false]);
    expect(calls).toContainEqual(["confirmRedefinition", true]);
  });

  it("skips criteria that have no definitions yet", () => {
    const bare = makeCriterion(7, "could_have");
    const envelope = makeEnvelope("redefining", [], [bare]);
    store.set({ envelope });
    const root = document.createElement("div");
    renderRedefine(root, store.get(), recordingActions().actions);
    expect(root.querySelectorAll(".redefine-criterion").length).toBe(0);
  });
});
