// Protocol-purity lint: the view-state reducer must not compute
// anything physical. Every displayed quantity has to originate in a
// broadcast message, so the reducer source may not contain contact
// thresholds, force comparisons, or any classification of its own.

import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

const src = readFileSync(
  fileURLToPath(new URL("../src/state.ts", import.meta.url)),
  "utf-8",
);

describe("reducer purity lint", () => {
  it("contains no threshold constants", () => {
    expect(src).not.toMatch(/0\.1\b/);
    expect(src).not.toMatch(/0\.5\b/);
    expect(src).not.toMatch(/thresh/i);
  });

  it("never compares the estimated force", () => {
    for (const line of src.split("\n")) {
      if (line.includes("f_ext")) {
        expect(line).not.toMatch(/[<>]/);
      }
    }
  });

  it("assigns the led only by copying the message field", () => {
    const assignments = src.split("\n").filter((l) => /led\s*[:=]/.test(l) && !l.includes("Led"));
    expect(assignments.length).toBeGreaterThan(0);
    for (const line of assignments) {
      expect(line).toMatch(/msg\.led|led:\s*null/);
    }
  });

  it("does no trigonometry or classification", () => {
    expect(src).not.toMatch(/Math\.(sin|cos|tan|atan)/);
    expect(src).not.toMatch(/"green"|"blue"|"red"/);
  });
});
