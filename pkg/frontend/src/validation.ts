/**
 * Client-side setup-form validation.
 *
 * Mirrors the service's rejection reasons so obviously invalid submissions
 * are blocked before the network round trip; the service remains the
 * authority and its 4xx messages surface in the same banner.
 */

export interface SetupInput {
  kind: string;
  numDoses: number;
  phi: number;
  k1?: number;
  k2?: number;
}

const CUTOFF_KINDS = new Set(["glr-sd", "glr-iso"]);

export function validateSetup(input: SetupInput): string[] {
  const problems: string[] = [];
  if (!Number.isInteger(input.numDoses) || input.numDoses < 1) {
    problems.push("the number of dose levels must be a positive integer");
  }
  if (!(input.phi > 0 && input.phi < 1)) {
    problems.push("the target DLT rate must lie strictly between 0 and 1");
  }
  if (CUTOFF_KINDS.has(input.kind)) {
    if (input.k1 === undefined || Number.isNaN(input.k1)) {
      problems.push("the escalation cutoff k1 is required");
    } else if (!(input.k1 >= 1)) {
      problems.push("the escalation cutoff k1 must be at least 1");
    }
    if (input.k2 === undefined || Number.isNaN(input.k2)) {
      problems.push("the de-escalation cutoff k2 is required");
    } else if (!(input.k2 >= 1)) {
      problems.push("the de-escalation cutoff k2 must be at least 1");
    }
  }
  return problems;
}
