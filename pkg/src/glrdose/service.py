"""JSON-over-HTTP trial-conduct service.

Endpoints:
  POST /trials                    create a trial
  GET  /trials/{id}               full state, history, fitted rates
  POST /trials/{id}/cohorts       record a cohort, get the recommendation
  GET  /trials/{id}/what-if       projected recommendation per possible outcome
  GET  /trials/{id}/decision-table  the trial design's pre-tabulated rule
  GET  /healthz

Every accepted mutation is appended to a per-trial JSON-lines event log and
fsynced before the response is sent; restart rebuilds state by replaying the
log through the same engine code that produced the recommendations.
Mutations carry an expected version for optimistic concurrency: a stale
version is rejected with 409 and leaves the trial untouched.  Errors are
JSON bodies of the form {"code": ..., "message": ...}.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .engine import (
    DesignKind,
    DesignSpec,
    StepOutcome,
    TrialState,
    TrialStoppedError,
    step,
)
from .evidence import validate_rate
from .isotonic import estimate_mtd, pava_mle
from .reports import decision_table, format_glr

SCHEMA_VERSION = 1

__all__ = ["SCHEMA_VERSION", "ApiError", "TrialStore", "create_app"]


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


@dataclass
class _TrialRuntime:
    trial_id: str
    spec: DesignSpec
    phi: float
    state: TrialState
    version: int = 1
    history: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def _outcome_payload(outcome: StepOutcome) -> dict:
    payload = {
        "action": outcome.decision.action.value,
        "eliminated": outcome.decision.eliminate_current,
        "dose_treated": outcome.dose_treated,
        "next_dose": outcome.next_dose,
        "stopped": outcome.stopped,
        "glr": outcome.glr.value,
        "log_glr": outcome.glr.log_value,
        "glr_display": format_glr(outcome.glr.value),
    }
    if outcome.joint_glr is not None:
        payload["joint_glr"] = outcome.joint_glr.value
        payload["joint_log_glr"] = outcome.joint_glr.log_value
        payload["joint_glr_display"] = format_glr(outcome.joint_glr.value)
    return payload


class TrialStore:
    """In-memory trial registry backed by an append-only event log."""

    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._trials: dict[str, _TrialRuntime] = {}
        self._idempotency: dict[str, str] = {}
        self._registry_lock = threading.Lock()
        self._load()

    # -- persistence --------------------------------------------------------

    def _log_path(self, trial_id: str) -> Path:
        return self.directory / f"{trial_id}.jsonl"

    def _append(self, trial_id: str, event: dict) -> None:
        line = json.dumps(event, separators=(",", ":"))
        with open(self._log_path(trial_id), "a") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _load(self) -> None:
        for path in sorted(self.directory.glob("*.jsonl")):
            trial = None
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    event = json.loads(line)
                    if event["event"] == "created":
                        trial = _TrialRuntime(
                            trial_id=event["trial_id"],
                            spec=DesignSpec.from_dict(event["design"]),
                            phi=event["phi"],
                            state=TrialState.fresh(event["num_doses"]),
                        )
                        key = event.get("idempotency_key")
                        if key:
                            self._idempotency[key] = trial.trial_id
                    elif event["event"] == "cohort":
                        assert trial is not None, f"cohort before creation in {path}"
                        trial.state, outcome = step(
                            trial.state,
                            trial.spec,
                            trial.phi,
                            event["dlt_count"],
                            cohort_size=event["cohort_size"],
                        )
                        trial.version += 1
                        trial.history.append(
                            {
                                "cohort": len(trial.history) + 1,
                                "dlt_count": event["dlt_count"],
                                "cohort_size": event["cohort_size"],
                                "version": trial.version,
                                **_outcome_payload(outcome),
                            }
                        )
            if trial is not None:
                self._trials[trial.trial_id] = trial

    # -- operations ---------------------------------------------------------

    def create_trial(
        self,
        spec: DesignSpec,
        num_doses: int,
        phi: float,
        idempotency_key: str | None = None,
    ) -> _TrialRuntime:
        with self._registry_lock:
            if idempotency_key and idempotency_key in self._idempotency:
                return self._trials[self._idempotency[idempotency_key]]
            trial_id = uuid.uuid4().hex
            trial = _TrialRuntime(
                trial_id=trial_id,
                spec=spec,
                phi=phi,
                state=TrialState.fresh(num_doses),
            )
            self._append(
                trial_id,
                {
                    "schema": SCHEMA_VERSION,
                    "event": "created",
                    "trial_id": trial_id,
                    "design": spec.to_dict(),
                    "num_doses": num_doses,
                    "phi": phi,
                    "idempotency_key": idempotency_key,
                },
            )
            self._trials[trial_id] = trial
            if idempotency_key:
                self._idempotency[idempotency_key] = trial_id
            return trial

    def get(self, trial_id: str) -> _TrialRuntime:
        trial = self._trials.get(trial_id)
        if trial is None:
            raise ApiError(404, "not_found", f"no trial with id {trial_id}")
        return trial

    def record_cohort(
        self, trial_id: str, dlt_count: int, cohort_size: int, expected_version: int
    ) -> tuple[_TrialRuntime, dict]:
        trial = self.get(trial_id)
        with trial.lock:
            if trial.version != expected_version:
                raise ApiError(
                    409,
                    "version_conflict",
                    f"expected version {expected_version}, trial is at {trial.version}",
                )
            if trial.state.stopped:
                raise ApiError(409, "trial_stopped", "the trial has already stopped")
            try:
                new_state, outcome = step(
                    trial.state, trial.spec, trial.phi, dlt_count, cohort_size
                )
            except (ValueError, TrialStoppedError) as exc:
                raise ApiError(400, "invalid_cohort", str(exc)) from exc
            # Durable before visible: the event hits disk before state changes.
            self._append(
                trial_id,
                {
                    "schema": SCHEMA_VERSION,
                    "event": "cohort",
                    "dlt_count": dlt_count,
                    "cohort_size": cohort_size,
                    "version": trial.version + 1,
                },
            )
            trial.state = new_state
            trial.version += 1
            entry = {
                "cohort": len(trial.history) + 1,
                "dlt_count": dlt_count,
                "cohort_size": cohort_size,
                "version": trial.version,
                **_outcome_payload(outcome),
            }
            trial.history.append(entry)
            return trial, entry

    def what_if(self, trial_id: str, cohort_size: int) -> list[dict]:
        trial = self.get(trial_id)
        if trial.state.stopped:
            raise ApiError(409, "trial_stopped", "the trial has already stopped")
        projections = []
        for dlt_count in range(cohort_size + 1):
            _, outcome = step(
                trial.state, trial.spec, trial.phi, dlt_count, cohort_size
            )
            projections.append({"dlt_count": dlt_count, **_outcome_payload(outcome)})
        return projections


# -- request/response models -------------------------------------------------


class DesignModel(BaseModel):
    kind: str
    k1: float | None = None
    k2: float | None = None
    ei_lower: float | None = None
    ei_upper: float | None = None
    phi1: float | None = None
    phi2: float | None = None

    def to_spec(self) -> DesignSpec:
        raw = {k: v for k, v in self.model_dump().items() if v is not None}
        return DesignSpec.from_dict(raw)


class CreateTrialRequest(BaseModel):
    design: DesignModel
    num_doses: int = Field(ge=1)
    phi: float
    idempotency_key: str | None = None


class CohortRequest(BaseModel):
    dlt_count: int = Field(ge=0)
    cohort_size: int = Field(default=3, ge=1)
    expected_version: int = Field(ge=1)


def _trial_snapshot(trial: _TrialRuntime) -> dict:
    state = trial.state
    tried = [d for d in state.per_dose if d.n > 0]
    snapshot = {
        "schema_version": SCHEMA_VERSION,
        "trial_id": trial.trial_id,
        "version": trial.version,
        "design": trial.spec.to_dict(),
        "phi": trial.phi,
        "num_doses": state.num_doses,
        "current_dose": state.current_dose,
        "stopped": state.stopped,
        "eliminated_at_or_above": state.eliminated_at_or_above,
        "cohorts_treated": state.cohorts_treated,
        "history": trial.history,
    }
    fitted = pava_mle(state.per_dose) if tried else None
    estimated = (
        0
        if state.stopped and state.eliminated_at_or_above == 1
        else (estimate_mtd(state.per_dose, trial.phi) if tried else 0)
    )
    snapshot["per_dose"] = [
        {
            "dose": i + 1,
            "n": d.n,
            "x": d.x,
            "observed_rate": (d.x / d.n) if d.n else None,
            "fitted_rate": fitted[i] if fitted else None,
        }
        for i, d in enumerate(state.per_dose)
    ]
    snapshot["estimated_mtd"] = estimated
    return snapshot


def create_app(store_dir: str | os.PathLike) -> FastAPI:
    store = TrialStore(store_dir)
    app = FastAPI(title="glrdose trial conduct", version="0.1.0")
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "schema_version": SCHEMA_VERSION}

    @app.post("/trials", status_code=201)
    def create_trial(request: CreateTrialRequest) -> dict:
        try:
            spec = request.design.to_spec()
            validate_rate(request.phi)
            if spec.kind is DesignKind.GLR_ISO or spec.kind is DesignKind.GLR_SD:
                spec.cutoffs()
        except ValueError as exc:
            raise ApiError(400, "invalid_design", str(exc)) from exc
        trial = store.create_trial(
            spec, request.num_doses, request.phi, request.idempotency_key
        )
        return _trial_snapshot(trial)

    @app.get("/trials/{trial_id}")
    def get_trial(trial_id: str) -> dict:
        return _trial_snapshot(store.get(trial_id))

    @app.post("/trials/{trial_id}/cohorts")
    def record_cohort(trial_id: str, request: CohortRequest) -> dict:
        if request.dlt_count > request.cohort_size:
            raise ApiError(
                400,
                "invalid_cohort",
                f"DLT count {request.dlt_count} exceeds cohort size {request.cohort_size}",
            )
        trial, entry = store.record_cohort(
            trial_id, request.dlt_count, request.cohort_size, request.expected_version
        )
        return {
            "schema_version": SCHEMA_VERSION,
            "trial_id": trial.trial_id,
            "version": trial.version,
            "recommendation": entry,
            "state": _trial_snapshot(trial),
        }

    @app.get("/trials/{trial_id}/what-if")
    def what_if(trial_id: str, cohort_size: int = 3) -> dict:
        trial = store.get(trial_id)
        return {
            "schema_version": SCHEMA_VERSION,
            "trial_id": trial_id,
            "version": trial.version,
            "cohort_size": cohort_size,
            "outcomes": store.what_if(trial_id, cohort_size),
        }

    @app.get("/trials/{trial_id}/decision-table")
    def trial_decision_table(trial_id: str, n_max: int = 12) -> dict:
        trial = store.get(trial_id)
        table = decision_table(trial.spec, trial.phi, n_max)
        return {
            "schema_version": SCHEMA_VERSION,
            "trial_id": trial_id,
            "headers": table.headers,
            "rows": [list(row) for row in table.rows],
        }

    return app
