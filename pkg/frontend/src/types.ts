/**
 * Types mirroring the trial-conduct service's JSON payloads.
 *
 * The dashboard renders these verbatim: every displayed action, evidence
 * value and elimination flag originates from a service response.
 */

export type ActionName = "escalate" | "stay" | "de-escalate";

export interface DesignPayload {
  kind: string;
  k1?: number;
  k2?: number;
  ei_lower?: number;
  ei_upper?: number;
  phi1?: number;
  phi2?: number;
}

export interface DoseRow {
  dose: number;
  n: number;
  x: number;
  observed_rate: number | null;
  fitted_rate: number | null;
}

export interface Recommendation {
  action: ActionName;
  eliminated: boolean;
  dose_treated: number;
  next_dose: number;
  stopped: boolean;
  glr: number;
  log_glr: number;
  glr_display: string;
  joint_glr?: number;
  joint_log_glr?: number;
  joint_glr_display?: string;
}

export interface HistoryEntry extends Recommendation {
  cohort: number;
  dlt_count: number;
  cohort_size: number;
  version: number;
}

export interface TrialSnapshot {
  schema_version: number;
  trial_id: string;
  version: number;
  design: DesignPayload;
  phi: number;
  num_doses: number;
  current_dose: number;
  stopped: boolean;
  eliminated_at_or_above: number | null;
  cohorts_treated: number;
  per_dose: DoseRow[];
  estimated_mtd: number;
  history: HistoryEntry[];
}

export interface CohortResponse {
  schema_version: number;
  trial_id: string;
  version: number;
  recommendation: HistoryEntry;
  state: TrialSnapshot;
}

export interface WhatIfOutcome extends Recommendation {
  dlt_count: number;
}

export interface WhatIfResponse {
  schema_version: number;
  trial_id: string;
  version: number;
  cohort_size: number;
  outcomes: WhatIfOutcome[];
}

export interface DecisionTableResponse {
  schema_version: number;
  trial_id: string;
  headers: string[];
  rows: (number | string)[][];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
