#!/usr/bin/env python3
"""Capture real server payloads as JSON fixtures for the frontend tests.

Run from the repository root with the tourplan package installed:

    python3 frontend/scripts/capture_fixtures.py
"""

from __future__ import annotations

import dataclasses
import json
import pathlib

from fastapi.testclient import TestClient

from tourplan.api import create_app
from tourplan.registry import block
from tourplan.scenario import load_scenario

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCENARIO = ROOT / "scenarios" / "tour450.json"
OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def save(name: str, payload) -> None:
    path = OUT / f"{name}.json"
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    print(f"wrote {path.relative_to(ROOT)}")


def capture_baseline() -> None:
    client = TestClient(create_app(load_scenario(SCENARIO)))
    save("categories", client.get("/categories").json())
    session = client.post("/plans", json={"interactive": True}).json()
    save("session-done", session)
    sid = session["session_id"]
    save("curve-done", client.get(f"/plans/{sid}/curve").json())
    save("itinerary", client.post(f"/plans/{sid}/compose").json())


def capture_negotiation() -> None:
    scenario = load_scenario(SCENARIO)
    # Close every C4 offer entirely so the first round has an empty category.
    matrix = scenario.matrix
    for offer in matrix.column("C4"):
        matrix = block(matrix, offer.id, (0.0, 100000.0))
    blocked = dataclasses.replace(scenario, matrix=matrix)
    client = TestClient(create_app(blocked))
    awaiting = client.post("/plans", json={"interactive": True}).json()
    save("session-awaiting", awaiting)
    sid = awaiting["session_id"]
    resumed = client.post(
        f"/plans/{sid}/negotiation", json={"withdrawn": ["C4"]}).json()
    save("session-resumed", resumed)


def capture_step_curve() -> None:
    """Single zero-variance activity: the curve endpoint reports a step."""
    doc = {
        "categories": [{"id": "X1", "name": "Only stop", "kind": "fixed"}],
        "offers": [{
            "id": "X1-A", "category_id": "X1", "name": "Sure thing",
            "estimate": {"optimistic": 400, "most_likely": 400,
                         "pessimistic": 400},
            "windows": [{"start": 0, "end": 100000}],
            "cost": 10, "capacity": 4,
        }],
        "constraints": {"max_cost": None, "party_size": 1, "plan_epoch": 0},
        "fc_order": ["X1"], "nc_set": [], "deadline": 450,
        "precedence_template": [],
    }
    from tourplan.scenario import parse_scenario
    client = TestClient(create_app(parse_scenario(doc)))
    session = client.post("/plans", json={}).json()
    save("curve-step", client.get(f"/plans/{session['session_id']}/curve").json())


def capture_z2_curve() -> None:
    """Estimates 400/430/460 against deadline 450: SD = 10, z = 2.0."""
    doc = {
        "categories": [{"id": "X1", "name": "Only stop", "kind": "fixed"}],
        "offers": [{
            "id": "X1-A", "category_id": "X1", "name": "Spread",
            "estimate": {"optimistic": 400, "most_likely": 430,
                         "pessimistic": 460},
            "windows": [{"start": 0, "end": 100000}],
            "cost": 10, "capacity": 4,
        }],
        "constraints": {"max_cost": None, "party_size": 1, "plan_epoch": 0},
        "fc_order": ["X1"], "nc_set": [], "deadline": 450,
        "precedence_template": [],
    }
    from tourplan.scenario import parse_scenario
    client = TestClient(create_app(parse_scenario(doc)))
    session = client.post("/plans", json={}).json()
    save("curve-z2", client.get(f"/plans/{session['session_id']}/curve").json())


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    capture_baseline()
    capture_negotiation()
    capture_step_curve()
    capture_z2_curve()


if __name__ == "__main__":
    main()
