"""HTTP API: storage round trips, solves, what-ifs, and status codes."""

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from helpers import make_project

from valueplan import machine_json, parse_project, serialize_project
from valueplan.planner import project_influences
from valueplan.service import create_app, influence_payload

DEMO_TEXT = (
    Path(__file__).resolve().parent.parent / "demo" / "project.json"
).read_text()


@pytest.fixture()
def client():
    return TestClient(create_app())


@pytest.fixture()
def stored(client):
    response = client.post("/api/projects", content=DEMO_TEXT)
    assert response.status_code == 201
    return response.json()["id"]


def test_post_then_get_round_trips_canonical_document(client, stored):
    response = client.get(f"/api/projects/{stored}")
    assert response.status_code == 200
    canonical = serialize_project(parse_project(DEMO_TEXT))
    assert response.text == canonical


def test_put_replaces_document(client, stored):
    project = make_project([1], [[5]], 1)
    response = client.put(
        f"/api/projects/{stored}", content=serialize_project(project)
    )
    assert response.status_code == 200
    assert client.get(f"/api/projects/{stored}").text == \
        serialize_project(project)


def test_solve_demo(client, stored):
    response = client.post(f"/api/projects/{stored}/solve", content="")
    assert response.status_code == 200
    payload = response.json()
    assert payload["status"] == "optimal"
    assert payload["objective"] == 16.0
    assert payload["selection"] == [1, 3]
    assert payload["delivered"]["1"] == 16.0


def test_whatif_override_leaves_store_untouched(client, stored):
    before = client.get(f"/api/projects/{stored}")
    h_before = hashlib.sha256(before.content).hexdigest()

    response = client.post(
        f"/api/projects/{stored}/whatif", json={"budget": 9}
    )
    assert response.status_code == 200
    assert response.json()["objective"] == 18.0
    assert response.json()["selection"] == [1, 2]

    for _ in range(3):
        client.post(f"/api/projects/{stored}/whatif",
                    json={"budget": 20, "betas": {"2": 1}})
    after = client.get(f"/api/projects/{stored}")
    assert hashlib.sha256(after.content).hexdigest() == h_before


def test_solve_persists_overrides(client, stored):
    response = client.post(
        f"/api/projects/{stored}/solve", json={"budget": 9}
    )
    assert response.status_code == 200
    stored_doc = client.get(f"/api/projects/{stored}").text
    assert parse_project(stored_doc).budget == 9


def test_infeasible_beta_returns_409_with_report(client, stored):
    response = client.post(
        f"/api/projects/{stored}/whatif", json={"betas": {"2": 999}}
    )
    assert response.status_code == 409
    payload = response.json()
    assert payload["status"] == "infeasible"
    assert payload["selection"] == []
    assert payload["objective"] is None


def test_influence_endpoint_matches_module_bytes(client, stored):
    response = client.get(f"/api/projects/{stored}/influence?type=2")
    assert response.status_code == 200
    project = parse_project(DEMO_TEXT)
    expected = machine_json(
        influence_payload(project_influences(project), 2)
    ).encode()
    assert response.content == expected


def test_influence_type_out_of_range(client, stored):
    response = client.get(f"/api/projects/{stored}/influence?type=5")
    assert response.status_code == 400


def test_unknown_project_404(client):
    assert client.get("/api/projects/missing").status_code == 404
    assert client.post("/api/projects/missing/solve", content="").status_code == 404


def test_malformed_document_422(client):
    response = client.post("/api/projects", content="{not json")
    assert response.status_code == 422
    assert "line" in response.json()["detail"]


def test_invalid_project_400_with_violations(client):
    doc = {
        "budget": 1,
        "requirements": [
            {"id": 1, "label": "", "cost": 0, "expected_values": [0, 0]}
        ],
    }
    response = client.post("/api/projects", content=json.dumps(doc))
    assert response.status_code == 400
    violations = response.json()["violations"]
    assert violations[0]["rule"] == "expected-values-length"


def test_unknown_override_field_422(client, stored):
    response = client.post(
        f"/api/projects/{stored}/whatif", json={"budgetz": 9}
    )
    assert response.status_code == 422


def test_invalid_override_400(client, stored):
    response = client.post(
        f"/api/projects/{stored}/whatif", json={"betas": {"1": 5}}
    )
    assert response.status_code == 400


def test_value_types_catalog(client):
    response = client.get("/api/value-types")
    assert response.status_code == 200
    catalog = response.json()
    assert len(catalog) == 58
    assert catalog[0] == {"index": 1, "name": "Wealth"}


def test_concurrent_solves_are_identical(client, stored):
    def solve(_):
        return client.post(
            f"/api/projects/{stored}/whatif", json={"budget": 9}
        ).content

    with ThreadPoolExecutor(max_workers=4) as pool:
        bodies = list(pool.map(solve, range(8)))
    assert len(set(bodies)) == 1


def test_timeout_override_reports_incumbent_or_409(client, stored):
    response = client.post(
        f"/api/projects/{stored}/solve", json={"timeout": 0}
    )
    if response.status_code == 200:
        assert response.json()["status"] in (
            "optimal", "timeout_with_incumbent"
        )
    else:
        assert response.status_code == 409
        assert response.json()["status"] == "timeout_no_incumbent"


def test_write_through_directory(tmp_path):
    app = create_app(data_dir=tmp_path)
    client = TestClient(app)
    pid = client.post("/api/projects", content=DEMO_TEXT).json()["id"]
    saved = (tmp_path / f"{pid}.json").read_text()
    assert saved == client.get(f"/api/projects/{pid}").text

    # A fresh app over the same directory sees the stored project.
    reopened = TestClient(create_app(data_dir=tmp_path))
    assert reopened.get(f"/api/projects/{pid}").text == saved
