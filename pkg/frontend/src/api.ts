/**
 * Typed client for the trial-conduct service.
 */

import type {
  ApiErrorBody,
  CohortResponse,
  DecisionTableResponse,
  DesignPayload,
  TrialSnapshot,
  WhatIfResponse,
} from "./types";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(`${base}${path}`, {
      headers: { "content-type": "application/json" },
      ...init,
    });
  } catch (err) {
    throw new ServiceError(0, "unreachable", `service unreachable: ${String(err)}`);
  }
  if (!response.ok) {
    let body: ApiErrorBody | undefined;
    try {
      body = (await response.json()) as ApiErrorBody;
    } catch {
      body = undefined;
    }
    throw new ServiceError(
      response.status,
      body?.code ?? "error",
      body?.message ?? `request failed with status ${response.status}`,
    );
  }
  return (await response.json()) as T;
}

export class TrialClient {
  constructor(private readonly base: string = "") {}

  createTrial(
    design: DesignPayload,
    numDoses: number,
    phi: number,
    idempotencyKey?: string,
  ): Promise<TrialSnapshot> {
    return request(this.base, "/trials", {
      method: "POST",
      body: JSON.stringify({
        design,
        num_doses: numDoses,
        phi,
        idempotency_key: idempotencyKey ?? null,
      }),
    });
  }

  getTrial(trialId: string): Promise<TrialSnapshot> {
    return request(this.base, `/trials/${trialId}`);
  }

  recordCohort(
    trialId: string,
    dltCount: number,
    cohortSize: number,
    expectedVersion: number,
  ): Promise<CohortResponse> {
    return request(this.base, `/trials/${trialId}/cohorts`, {
      method: "POST",
      body: JSON.stringify({
        dlt_count: dltCount,
        cohort_size: cohortSize,
        expected_version: expectedVersion,
      }),
    });
  }

  whatIf(trialId: string, cohortSize: number): Promise<WhatIfResponse> {
    return request(this.base, `/trials/${trialId}/what-if?cohort_size=${cohortSize}`);
  }

  decisionTable(trialId: string, nMax = 12): Promise<DecisionTableResponse> {
    return request(this.base, `/trials/${trialId}/decision-table?n_max=${nMax}`);
  }
}
