import threading

import pytest
from fastapi.testclient import TestClient

from glrdose.service import create_app

GLR_DESIGN = {"kind": "glr-sd", "k1": 1.5, "k2": 1.05}


@pytest.fixture()
def client(tmp_path):
    app = create_app(tmp_path / "store")
    with TestClient(app) as c:
        yield c


def create_trial(client, design=GLR_DESIGN, num_doses=6, phi=0.25, **extra):
    response = client.post(
        "/trials",
        json={"design": design, "num_doses": num_doses, "phi": phi, **extra},
    )
    assert response.status_code == 201, response.text
    return response.json()


def record(client, trial_id, dlt_count, version, cohort_size=3):
    return client.post(
        f"/trials/{trial_id}/cohorts",
        json={
            "dlt_count": dlt_count,
            "cohort_size": cohort_size,
            "expected_version": version,
        },
    )


class TestHealth:
    def test_healthz(self, client):
        response = client.get("/healthz")
        assert response.status_code == 200
        assert response.json()["status"] == "ok"


class TestCreateTrial:
    def test_new_trial_starts_at_lowest_dose(self, client):
        body = create_trial(client)
        assert body["current_dose"] == 1
        assert body["version"] == 1
        fetched = client.get(f"/trials/{body['trial_id']}").json()
        assert fetched["current_dose"] == 1
        assert fetched["design"] == GLR_DESIGN | {"kind": "glr-sd"}

    def test_rejects_low_cutoff(self, client):
        response = client.post(
            "/trials",
            json={
                "design": {"kind": "glr-sd", "k1": 0.5, "k2": 1.05},
                "num_doses": 6,
                "phi": 0.25,
            },
        )
        assert response.status_code == 400
        body = response.json()
        assert body["code"] == "invalid_design"
        assert "k1" in body["message"] or ">= 1" in body["message"]

    def test_rejects_bad_target(self, client):
        response = client.post(
            "/trials",
            json={"design": {"kind": "boin"}, "num_doses": 6, "phi": 1.25},
        )
        assert response.status_code == 400

    def test_idempotency_key_returns_same_trial(self, client):
        first = create_trial(client, idempotency_key="site-a-001")
        second = create_trial(client, idempotency_key="site-a-001")
        assert first["trial_id"] == second["trial_id"]

    def test_unknown_trial_is_404(self, client):
        response = client.get("/trials/doesnotexist")
        assert response.status_code == 404
        assert response.json()["code"] == "not_found"


class TestRecordCohort:
    def test_clean_first_cohort_escalates(self, client):
        trial = create_trial(client)
        response = record(client, trial["trial_id"], 0, trial["version"])
        assert response.status_code == 200
        body = response.json()
        rec = body["recommendation"]
        assert rec["action"] == "escalate"
        assert rec["glr_display"] == "2.37"
        assert body["state"]["current_dose"] == 2
        assert body["version"] == 2

    def test_fully_toxic_first_cohort_stops_trial(self, client):
        trial = create_trial(client)
        body = record(client, trial["trial_id"], 3, trial["version"]).json()
        rec = body["recommendation"]
        assert rec["action"] == "de-escalate"
        assert rec["eliminated"] is True
        assert rec["stopped"] is True
        state = client.get(f"/trials/{trial['trial_id']}").json()
        assert state["stopped"] is True
        assert state["estimated_mtd"] == 0

    def test_stale_version_conflicts_and_leaves_state_alone(self, client):
        trial = create_trial(client)
        assert record(client, trial["trial_id"], 0, trial["version"]).status_code == 200
        stale = record(client, trial["trial_id"], 1, trial["version"])
        assert stale.status_code == 409
        assert stale.json()["code"] == "version_conflict"
        state = client.get(f"/trials/{trial['trial_id']}").json()
        assert state["version"] == 2
        assert state["cohorts_treated"] == 1

    def test_rejects_dlt_above_cohort_size(self, client):
        trial = create_trial(client)
        response = record(client, trial["trial_id"], 4, trial["version"], cohort_size=3)
        assert response.status_code == 400
        assert response.json()["code"] == "invalid_cohort"

    def test_stopped_trial_rejects_more_cohorts(self, client):
        trial = create_trial(client)
        record(client, trial["trial_id"], 3, 1)
        response = record(client, trial["trial_id"], 0, 2)
        assert response.status_code == 409
        assert response.json()["code"] == "trial_stopped"

    def test_fitted_rates_follow_the_monotone_mle(self, client):
        trial = create_trial(client)
        record(client, trial["trial_id"], 1, 1)
        state = client.get(f"/trials/{trial['trial_id']}").json()
        dose1 = state["per_dose"][0]
        assert dose1["n"] == 3 and dose1["x"] == 1
        assert dose1["fitted_rate"] == pytest.approx(1 / 3)
        assert state["estimated_mtd"] == 0  # 1/3 is above the 0.25 target

    def test_exactly_one_concurrent_mutation_wins(self, client):
        trial = create_trial(client)
        results = []

        def submit():
            results.append(record(client, trial["trial_id"], 0, 1).status_code)

        threads = [threading.Thread(target=submit) for _ in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sorted(results) == [200, 409]
        assert client.get(f"/trials/{trial['trial_id']}").json()["version"] == 2


class TestWhatIf:
    def test_projects_every_outcome_without_mutating(self, client):
        trial = create_trial(client)
        response = client.get(f"/trials/{trial['trial_id']}/what-if")
        assert response.status_code == 200
        body = response.json()
        outcomes = body["outcomes"]
        assert [o["dlt_count"] for o in outcomes] == [0, 1, 2, 3]
        ranks = {"escalate": 0, "stay": 1, "de-escalate": 2}
        order = [ranks[o["action"]] for o in outcomes]
        assert order == sorted(order)
        assert client.get(f"/trials/{trial['trial_id']}").json()["version"] == 1

    def test_projection_matches_committed_outcome(self, client):
        trial = create_trial(client)
        projected = client.get(f"/trials/{trial['trial_id']}/what-if").json()["outcomes"]
        committed = record(client, trial["trial_id"], 2, 1).json()["recommendation"]
        match = next(o for o in projected if o["dlt_count"] == 2)
        for key in ("action", "eliminated", "glr", "next_dose", "stopped"):
            assert match[key] == committed[key]

    def test_stopped_trial_has_no_projections(self, client):
        trial = create_trial(client)
        record(client, trial["trial_id"], 3, 1)
        response = client.get(f"/trials/{trial['trial_id']}/what-if")
        assert response.status_code == 409


class TestDecisionTableEndpoint:
    def test_matches_recommendations(self, client):
        trial = create_trial(client)
        table = client.get(f"/trials/{trial['trial_id']}/decision-table").json()
        rows = {row[0]: dict(zip(table["headers"], row)) for row in table["rows"]}

        def expected_action(n, x):
            row = rows[n]
            if row["escalate_max_x"] != "" and x <= row["escalate_max_x"]:
                return "escalate"
            if row["stay_min_x"] != "" and row["stay_min_x"] <= x <= row["stay_max_x"]:
                return "stay"
            return "de-escalate"

        version = 1
        for dlt in (0, 1, 2):
            body = record(client, trial["trial_id"], dlt, version).json()
            version = body["version"]
            rec = body["recommendation"]
            state = client.get(f"/trials/{trial['trial_id']}").json()
            dose = rec["dose_treated"]
            per_dose = state["per_dose"][dose - 1]
            assert rec["action"] == expected_action(per_dose["n"], per_dose["x"])


class TestPersistence:
    def test_restart_preserves_every_accepted_mutation(self, tmp_path):
        store = tmp_path / "store"
        with TestClient(create_app(store)) as client:
            trial = create_trial(client, idempotency_key="k1")
            record(client, trial["trial_id"], 0, 1)
            record(client, trial["trial_id"], 1, 2)
            before = client.get(f"/trials/{trial['trial_id']}").json()

        with TestClient(create_app(store)) as reborn:
            after = reborn.get(f"/trials/{trial['trial_id']}").json()
            assert after == before
            # the idempotency index also survives the restart
            again = create_trial(reborn, idempotency_key="k1")
            assert again["trial_id"] == trial["trial_id"]

    def test_joint_likelihood_design_round_trips(self, tmp_path):
        store = tmp_path / "store"
        design = {"kind": "glr-iso", "k1": 1.5, "k2": 1.1}
        with TestClient(create_app(store)) as client:
            trial = create_trial(client, design=design)
            body = record(client, trial["trial_id"], 1, 1).json()
            assert "joint_glr" in body["recommendation"]
            before = client.get(f"/trials/{trial['trial_id']}").json()
        with TestClient(create_app(store)) as reborn:
            assert reborn.get(f"/trials/{trial['trial_id']}").json() == before
