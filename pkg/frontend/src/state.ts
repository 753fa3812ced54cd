/**
 * Dashboard state and transitions.
 *
 * A tiny store: either the setup screen or a trial screen with the latest
 * server snapshot, the current what-if projections, an optional pre-filled
 * outcome from the what-if panel, and at most one banner. All transitions
 * take server payloads; none invent trial data.
 */

import type { HistoryEntry, TrialSnapshot, WhatIfResponse } from "./types";

export interface AppState {
  screen: "setup" | "trial";
  setupErrors: string[];
  snapshot: TrialSnapshot | null;
  whatIf: WhatIfResponse | null;
  lastRecommendation: HistoryEntry | null;
  prefillDlt: number | undefined;
  banner: { kind: "conflict" | "error"; message: string } | null;
}

export function initialState(): AppState {
  return {
    screen: "setup",
    setupErrors: [],
    snapshot: null,
    whatIf: null,
    lastRecommendation: null,
    prefillDlt: undefined,
    banner: null,
  };
}

export function withSetupErrors(state: AppState, errors: string[]): AppState {
  return { ...state, screen: "setup", setupErrors: errors };
}

export function withTrial(
  state: AppState,
  snapshot: TrialSnapshot,
  whatIf: WhatIfResponse | null,
): AppState {
  return {
    ...state,
    screen: "trial",
    setupErrors: [],
    snapshot,
    whatIf,
    lastRecommendation: snapshot.history[snapshot.history.length - 1] ?? null,
    prefillDlt: undefined,
    banner: null,
  };
}

export function withCohortResult(
  state: AppState,
  snapshot: TrialSnapshot,
  recommendation: HistoryEntry,
  whatIf: WhatIfResponse | null,
): AppState {
  return {
    ...state,
    screen: "trial",
    snapshot,
    whatIf,
    lastRecommendation: recommendation,
    prefillDlt: undefined,
    banner: null,
  };
}

export function withPrefill(state: AppState, dltCount: number): AppState {
  return { ...state, prefillDlt: dltCount };
}

export function withConflict(state: AppState, message: string): AppState {
  return { ...state, banner: { kind: "conflict", message } };
}

export function withError(state: AppState, message: string): AppState {
  return { ...state, banner: { kind: "error", message } };
}
