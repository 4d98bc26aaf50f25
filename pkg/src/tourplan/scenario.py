"""Scenario file: the single JSON document driving registry, planner, and bench.

Layout (UTF-8 JSON, field names match the domain types):

    {
      "categories": [{"id": "C1", "name": "flight", "kind": "fixed"}, ...],
      "offers": [{"id": "C1-WS1", "category_id": "C1", "name": "...",
                  "estimate": {"optimistic": 180, "most_likely": 180,
                               "pessimistic": 180},
                  "cost": 0, "capacity": 1,
                  "windows": [{"start": 0, "end": 100000}]}, ...],
      "constraints": {"max_cost": null, "party_size": 1, "plan_epoch": 0},
      "fc_order": ["C1", "C2", "C3"],
      "nc_set": ["C4", "C5", "C6"],
      "deadline": 450,
      "precedence_template": [["C1", "C2"], ...]   # optional
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import ValidationError
from .pert import ThreePointEstimate
from .registry import (
    Category,
    ConstraintSet,
    ServiceMatrix,
    ServiceOffer,
    matrix_of,
)


@dataclass(frozen=True)
class Scenario:
    matrix: ServiceMatrix
    constraints: ConstraintSet
    fc_order: tuple[str, ...]
    nc_set: tuple[str, ...]
    deadline: float
    precedence_template: tuple[tuple[str, str], ...] = ()


def _require(doc: dict, key: str, ctx: str):
    if key not in doc:
        raise ValidationError(f"scenario {ctx}: missing field {key!r}")
    return doc[key]


def parse_scenario(doc: dict) -> Scenario:
    categories = []
    for entry in _require(doc, "categories", "root"):
        categories.append(Category(
            id=_require(entry, "id", "category"),
            name=entry.get("name", entry["id"]),
            kind=_require(entry, "kind", "category"),
        ))
    offers = []
    for entry in _require(doc, "offers", "root"):
        est = _require(entry, "estimate", f"offer {entry.get('id')}")
        offers.append(ServiceOffer(
            id=_require(entry, "id", "offer"),
            category_id=_require(entry, "category_id", "offer"),
            name=entry.get("name", entry["id"]),
            estimate=ThreePointEstimate(
                optimistic=_require(est, "optimistic", "estimate"),
                most_likely=_require(est, "most_likely", "estimate"),
                pessimistic=_require(est, "pessimistic", "estimate"),
            ),
            cost=entry.get("cost", 0.0),
            capacity=entry.get("capacity", 1),
            windows=tuple(
                (_require(w, "start", "window"), _require(w, "end", "window"))
                for w in entry.get("windows", [])
            ),
            attributes=entry.get("attributes", {}),
        ))
    raw_constraints = doc.get("constraints", {})
    constraints = ConstraintSet(
        max_cost=raw_constraints.get("max_cost"),
        party_size=raw_constraints.get("party_size", 1),
        plan_epoch=raw_constraints.get("plan_epoch", 0.0),
    )
    fc_order = tuple(doc.get("fc_order", []))
    nc_set = tuple(doc.get("nc_set", []))
    deadline = _require(doc, "deadline", "root")
    if not isinstance(deadline, (int, float)) or deadline <= 0:
        raise ValidationError(f"scenario deadline must be a positive number, got {deadline!r}")
    template = tuple((a, b) for a, b in doc.get("precedence_template", []))

    matrix = matrix_of(categories, offers)
    known = {c.id for c in categories}
    for cid in (*fc_order, *nc_set):
        if cid not in known:
            raise ValidationError(f"scenario fc_order/nc_set: unknown category {cid!r}")
    return Scenario(matrix, constraints, fc_order, nc_set, float(deadline), template)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"scenario {path}: not valid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"scenario {path}: top level must be an object")
    return parse_scenario(doc)


def scenario_to_doc(scenario: Scenario) -> dict:
    """Inverse of parse_scenario, for serving and round-tripping."""
    return {
        "categories": [
            {"id": c.id, "name": c.name, "kind": c.kind}
            for c in scenario.matrix.categories
        ],
        "offers": [
            {
                "id": o.id,
                "category_id": o.category_id,
                "name": o.name,
                "estimate": {
                    "optimistic": o.estimate.optimistic,
                    "most_likely": o.estimate.most_likely,
                    "pessimistic": o.estimate.pessimistic,
                },
                "cost": o.cost,
                "capacity": o.capacity,
                "windows": [{"start": s, "end": e} for s, e in o.windows],
            }
            for c in scenario.matrix.categories
            for o in scenario.matrix.offers.get(c.id, ())
        ],
        "constraints": {
            "max_cost": scenario.constraints.max_cost,
            "party_size": scenario.constraints.party_size,
            "plan_epoch": scenario.constraints.plan_epoch,
        },
        "fc_order": list(scenario.fc_order),
        "nc_set": list(scenario.nc_set),
        "deadline": scenario.deadline,
        "precedence_template": [list(e) for e in scenario.precedence_template],
    }
