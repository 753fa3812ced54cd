import { describe, expect, it } from "vitest";

import { validateSetup } from "../src/validation";

describe("validateSetup", () => {
  it("accepts a standard likelihood-rule setup", () => {
    expect(
      validateSetup({ kind: "glr-sd", numDoses: 6, phi: 0.25, k1: 1.5, k2: 1.05 }),
    ).toEqual([]);
  });

  it("blocks cutoffs below one before any network call", () => {
    const problems = validateSetup({
      kind: "glr-sd",
      numDoses: 6,
      phi: 0.25,
      k1: 0.9,
      k2: 1.05,
    });
    expect(problems.some((p) => p.includes("k1"))).toBe(true);
  });

  it("requires both cutoffs for likelihood designs only", () => {
    expect(
      validateSetup({ kind: "glr-iso", numDoses: 6, phi: 0.25 }).length,
    ).toBeGreaterThan(0);
    expect(validateSetup({ kind: "boin", numDoses: 6, phi: 0.25 })).toEqual([]);
  });

  it("rejects targets outside the open unit interval", () => {
    for (const phi of [0, 1, -0.1, 1.4]) {
      expect(
        validateSetup({ kind: "boin", numDoses: 6, phi }).length,
      ).toBeGreaterThan(0);
    }
  });

  it("rejects a nonpositive dose count", () => {
    expect(
      validateSetup({ kind: "boin", numDoses: 0, phi: 0.25 }).length,
    ).toBeGreaterThan(0);
  });
});
