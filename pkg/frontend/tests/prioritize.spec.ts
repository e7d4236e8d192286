import { beforeEach, describe, expect, it } from "vitest";

import { renderPrioritize } from "../src/screens/prioritize.js";
import { store } from "../src/store.js";
import type { TierName } from "../src/types.js";
import { makeCriterion, makeEnvelope, recordingActions } from "./helpers.js";

function mount(tiers: TierName[]) {
  const criteria = tiers.map((tier, i) => makeCriterion(i, tier));
  store.set({ envelope: makeEnvelope("prioritizing", [], criteria) });
  const root = document.createElement("div");
  const recorder = recordingActions();
  renderPrioritize(root, store.get(), recorder.actions);
  return { root, ...recorder };
}

describe("prioritize screen", () => {
  beforeEach(() => {
    store.reset();
    document.body.innerHTML = "";
  });

  it("places chips in their bins and the rest in the tray", () => {
    const { root } = mount(["must_have", "unassigned", "could_have"]);
    const mustBin = root.querySelector('[data-tier="must_have"]')!;
    const tray = root.querySelector('[data-testid="unassigned-tray"]')!;
    expect(mustBin.querySelector('[data-criterion-id="crit-0"]')).not.toBeNull();
    expect(tray.querySelector('[data-criterion-id="crit-1"]')).not.toBeNull();
    expect(root.querySelector('[data-tier="could_have"] [data-criterion-id="crit-2"]')).not.toBeNull();
  });

  it("gates continue on a fully sorted set", () => {
    const withGap = mount(["must_have", "unassigned"]);
    expect(
      withGap.root.querySelector<HTMLButtonElement>('[data-testid="prioritize-continue"]')?.disabled,
    ).toBe(true);

    store.reset();
    const sorted = mount(["must_have", "should_have"]);
    const button = sorted.root.querySelector<HTMLButtonElement>(
      '[data-testid="prioritize-continue"]',
    )!;
    expect(button.disabled).toBe(false);
    button.click();
    expect(sorted.calls).toContainEqual(["confirmPrioritization"]);
  });

  it("assigns tiers from the keyboard", () => {
    const { root, calls } = mount(["unassigned"]);
    const chip = root.querySelector<HTMLElement>('[data-criterion-id="crit-0"]')!;
    chip.dispatchEvent(new KeyboardEvent("keydown", { key: "2", bubbles: true }));
    expect(calls).toContainEqual(["assignTier", "crit-0", "should_have"]);
  });

  it("retires a criterion from the keyboard and from its × button", () => {
    const { root, calls } = mount(["unassigned", "must_have"]);
    const chip = root.querySelector<HTMLElement>('[data-criterion-id="crit-0"]')!;
    chip.dispatchEvent(new KeyboardEvent("keydown", { key: "Delete", bubbles: true }));
    root
      .querySelector<HTMLButtonElement>('[data-criterion-id="crit-1"] .chip-remove')!
      .click();
    expect(calls).toContainEqual(["removeCriterion", "crit-0"]);
    expect(calls).toContainEqual(["removeCriterion", "crit-1"]);
  });

  it("drops a dragged chip into a bin via the store mirror", () => {
    // jsdom has no DataTransfer; the handlers fall back to store.dragId,
    // which is exactly what this exercises.
    const { root, calls } = mount(["unassigned"]);
    const chip = root.querySelector<HTMLElement>('[data-criterion-id="crit-0"]')!;
    chip.dispatchEvent(new Event("dragstart"));
    expect(store.get().dragId).toBe("crit-0");
    const bin = root.querySelector<HTMLElement>('[data-tier="could_have"]')!;
    bin.dispatchEvent(new Event("drop"));
    expect(calls).toContainEqual(["assignTier", "crit-0", "could_have"]);
    expect(store.get().dragId).toBeNull();
  });

  it("adds a criterion through the add affordance", () => {
    const { root, calls } = mount(["must_have"]);
    const input = root.querySelector<HTMLInputElement>('[data-testid="add-criterion-input"]')!;
    input.value = "warmth";
    input.form!.dispatchEvent(new Event("submit"));
    expect(calls).toContainEqual(["addCriterion", "warmth"]);
  });
});
