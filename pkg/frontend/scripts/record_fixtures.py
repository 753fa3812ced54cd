#!/usr/bin/env python3
"""Record real service responses as contract-test fixtures.

Runs the trial-conduct service in-process and replays the scripted flows
the dashboard tests assert against. Re-run after any service change:

    python frontend/scripts/record_fixtures.py
"""

import json
from pathlib import Path
from tempfile import TemporaryDirectory

from fastapi.testclient import TestClient

from glrdose.service import create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def run_flow(client: TestClient, design: dict, cohorts: list[int]) -> dict:
    created = client.post(
        "/trials", json={"design": design, "num_doses": 6, "phi": 0.25}
    )
    assert created.status_code == 201, created.text
    trial = created.json()
    trial_id = trial["trial_id"]
    steps = []
    version = trial["version"]
    for dlt in cohorts:
        what_if = client.get(f"/trials/{trial_id}/what-if")
        assert what_if.status_code == 200, what_if.text
        committed = client.post(
            f"/trials/{trial_id}/cohorts",
            json={"dlt_count": dlt, "cohort_size": 3, "expected_version": version},
        )
        assert committed.status_code == 200, committed.text
        body = committed.json()
        version = body["version"]
        steps.append(
            {"what_if": what_if.json(), "dlt_count": dlt, "committed": body}
        )
        if body["recommendation"]["stopped"]:
            break
    table = client.get(f"/trials/{trial_id}/decision-table")
    assert table.status_code == 200
    final = client.get(f"/trials/{trial_id}")
    assert final.status_code == 200
    return {
        "create": trial,
        "steps": steps,
        "decision_table": table.json(),
        "final_state": final.json(),
    }


def record_conflict(client: TestClient) -> dict:
    created = client.post(
        "/trials",
        json={
            "design": {"kind": "glr-sd", "k1": 1.5, "k2": 1.05},
            "num_doses": 4,
            "phi": 0.25,
        },
    ).json()
    trial_id = created["trial_id"]
    ok = client.post(
        f"/trials/{trial_id}/cohorts",
        json={"dlt_count": 0, "cohort_size": 3, "expected_version": 1},
    )
    stale = client.post(
        f"/trials/{trial_id}/cohorts",
        json={"dlt_count": 1, "cohort_size": 3, "expected_version": 1},
    )
    assert ok.status_code == 200 and stale.status_code == 409
    return {"status": stale.status_code, "body": stale.json()}


def record_invalid_design(client: TestClient) -> dict:
    response = client.post(
        "/trials",
        json={
            "design": {"kind": "glr-sd", "k1": 0.5, "k2": 1.05},
            "num_doses": 6,
            "phi": 0.25,
        },
    )
    assert response.status_code == 400
    return {"status": response.status_code, "body": response.json()}


def main() -> None:
    with TemporaryDirectory() as tmp:
        with TestClient(create_app(tmp)) as client:
            fixtures = {
                # evidence cutoffs 1.5/1.05: the exact rule de-escalates at 1/3
                "tight_cutoff_flow": run_flow(
                    client,
                    {"kind": "glr-sd", "k1": 1.5, "k2": 1.05},
                    [0, 1, 3],
                ),
                # the looser 1.1 de-escalation cutoff stays at 1/3, then an
                # all-event cohort trips elimination of the dose above
                "loose_cutoff_flow": run_flow(
                    client,
                    {"kind": "glr-sd", "k1": 1.5, "k2": 1.1},
                    [0, 1, 3],
                ),
                # an all-event first cohort eliminates the lowest dose and stops
                "stopped_flow": run_flow(
                    client,
                    {"kind": "glr-sd", "k1": 1.5, "k2": 1.05},
                    [3],
                ),
                "version_conflict": record_conflict(client),
                "invalid_design": record_invalid_design(client),
            }
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    out = FIXTURE_DIR / "service_fixtures.json"
    out.write_text(json.dumps(fixtures, indent=2) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
