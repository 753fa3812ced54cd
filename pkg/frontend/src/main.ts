/**
 * DOM wiring: renders the current state into #app and translates user
 * events into service calls.
 */

import { ServiceError, TrialClient } from "./api";
import {
  initialState,
  withCohortResult,
  withConflict,
  withError,
  withPrefill,
  withSetupErrors,
  withTrial,
  type AppState,
} from "./state";
import type { DesignPayload } from "./types";
import { validateSetup } from "./validation";
import {
  renderConflictBanner,
  renderErrorBanner,
  renderSetupForm,
  renderTrialPage,
} from "./views";

const client = new TrialClient("");
let state: AppState = initialState();

function setState(next: AppState): void {
  state = next;
  render();
}

function render(): void {
  const app = document.getElementById("app");
  if (!app) return;
  if (state.screen === "setup" || !state.snapshot) {
    app.innerHTML = renderSetupForm(state.setupErrors);
    return;
  }
  const banner =
    state.banner === null
      ? ""
      : state.banner.kind === "conflict"
        ? renderConflictBanner()
        : renderErrorBanner(state.banner.message, true);
  app.innerHTML =
    banner +
    renderTrialPage(state.snapshot, state.whatIf, state.lastRecommendation, state.prefillDlt);
}

function designFromForm(form: FormData): DesignPayload {
  const kind = String(form.get("kind") ?? "glr-sd");
  const design: DesignPayload = { kind };
  if (kind === "glr-sd" || kind === "glr-iso") {
    design.k1 = Number(form.get("k1"));
    design.k2 = Number(form.get("k2"));
  }
  return design;
}

async function refreshTrial(trialId: string): Promise<void> {
  const snapshot = await client.getTrial(trialId);
  const whatIf = snapshot.stopped ? null : await client.whatIf(trialId, 3);
  setState(withTrial(state, snapshot, whatIf));
}

async function handleSetupSubmit(form: HTMLFormElement): Promise<void> {
  const data = new FormData(form);
  const design = designFromForm(data);
  const input = {
    kind: design.kind,
    numDoses: Number(data.get("numDoses")),
    phi: Number(data.get("phi")),
    k1: design.k1,
    k2: design.k2,
  };
  const problems = validateSetup(input);
  if (problems.length) {
    setState(withSetupErrors(state, problems));
    return;
  }
  try {
    const snapshot = await client.createTrial(design, input.numDoses, input.phi);
    const whatIf = await client.whatIf(snapshot.trial_id, 3);
    setState(withTrial(state, snapshot, whatIf));
  } catch (err) {
    if (err instanceof ServiceError && err.status > 0) {
      setState(withSetupErrors(state, [err.message]));
    } else {
      setState(withSetupErrors(state, ["service unreachable; try again"]));
    }
  }
}

async function handleCohortSubmit(form: HTMLFormElement): Promise<void> {
  const snapshot = state.snapshot;
  if (!snapshot) return;
  const dltCount = Number(new FormData(form).get("dltCount"));
  try {
    const result = await client.recordCohort(
      snapshot.trial_id,
      dltCount,
      3,
      snapshot.version,
    );
    const whatIf = result.state.stopped
      ? null
      : await client.whatIf(snapshot.trial_id, 3);
    setState(withCohortResult(state, result.state, result.recommendation, whatIf));
  } catch (err) {
    if (err instanceof ServiceError && err.code === "version_conflict") {
      setState(withConflict(state, err.message));
    } else if (err instanceof ServiceError) {
      setState(withError(state, err.message));
    } else {
      setState(withError(state, String(err)));
    }
  }
}

function wireEvents(): void {
  document.addEventListener("submit", (event) => {
    const form = event.target as HTMLFormElement;
    if (form.id === "setup-form") {
      event.preventDefault();
      void handleSetupSubmit(form);
    } else if (form.id === "cohort-form") {
      event.preventDefault();
      void handleCohortSubmit(form);
    }
  });
  document.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const row = target.closest<HTMLElement>('[data-role="what-if-row"]');
    if (row?.dataset.dlt !== undefined) {
      // pre-fill only; recording always goes through the form's submit
      setState(withPrefill(state, Number(row.dataset.dlt)));
      return;
    }
    if (target.dataset.role === "refresh" || target.dataset.role === "retry") {
      const trialId = state.snapshot?.trial_id;
      if (trialId) {
        void refreshTrial(trialId).catch((err) =>
          setState(withError(state, String(err))),
        );
      }
    }
  });
}

wireEvents();
render();
