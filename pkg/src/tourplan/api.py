"""HTTP service exposing the registry, planning sessions, and composition.

Sessions are in-memory. Interactive decisions (withdrawals, tie choices) are
recorded and the whole plan is deterministically re-run from the transcript
on every resume, which makes replays reproduce outcomes exactly.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import composer, planner
from .errors import ValidationError
from .pert import normal_cdf
from .registry import available_submatrix
from .scenario import Scenario, scenario_to_doc

RUNNING = "running"
AWAITING_NEGOTIATION = "awaiting_negotiation"
AWAITING_TIE_CHOICE = "awaiting_tie_choice"
DONE = "done"
FAILED = "failed"


class PlanRequestBody(BaseModel):
    deadline: float | None = None
    fc_order: list[str] | None = None
    nc_set: list[str] | None = None
    search_mode: str | None = None
    candidate_cap: int | None = None
    interactive: bool = False


class NegotiationBody(BaseModel):
    withdrawn: list[str]
    allow_fixed: bool = False


class ChoiceBody(BaseModel):
    candidate: int


@dataclass
class PlanSession:
    id: str
    request: planner.PlanRequest
    interactive: bool
    state: str = RUNNING
    outcome: planner.PlanOutcome | None = None
    prompt: planner.NegotiationPrompt | None = None
    decisions: list[planner.NegotiationDecision] = field(default_factory=list)
    choice: int | None = None
    itinerary: composer.Itinerary | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class _Pause(Exception):
    def __init__(self, prompt):
        self.prompt = prompt


def _run_session(session: PlanSession, scenario: Scenario) -> None:
    """(Re-)run planning from scratch, replaying recorded decisions."""
    recorded = iter(session.decisions)

    def negotiator(prompt):
        try:
            return next(recorded)
        except StopIteration:
            if session.interactive:
                raise _Pause(prompt) from None
            return planner.auto_decline(prompt)

    def chooser(ties):
        return session.choice  # None keeps the tie open

    try:
        outcome = planner.plan(
            session.request, scenario.matrix, negotiator=negotiator,
            chooser=chooser if session.interactive else None)
    except _Pause as pause:
        session.state = AWAITING_NEGOTIATION
        session.prompt = pause.prompt
        return
    session.outcome = outcome
    session.prompt = outcome.prompt
    if outcome.status == "selected":
        session.state = DONE
    elif outcome.status == "tie":
        session.state = AWAITING_TIE_CHOICE
    elif outcome.status == "negotiation_needed":
        session.state = AWAITING_NEGOTIATION
    else:
        session.state = FAILED


def session_doc(session: PlanSession) -> dict:
    doc = {
        "session_id": session.id,
        "state": session.state,
        "transcript": [
            {"withdrawn": list(d.withdrawn), "allow_fixed": d.allow_fixed}
            for d in session.decisions
        ],
    }
    if session.prompt is not None:
        doc["prompt"] = {
            "withdrawable": list(session.prompt.withdrawable),
            "diagnostics": [list(d) for d in session.prompt.diagnostics],
        }
    if session.outcome is not None:
        doc["outcome"] = planner.plan_report(session.outcome, session.request)
    return doc


def create_app(scenario: Scenario) -> FastAPI:
    app = FastAPI(title="tourplan")
    sessions: dict[str, PlanSession] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    @app.exception_handler(ValidationError)
    async def _validation(request, exc):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    def get_session(session_id: str) -> PlanSession:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no session {session_id!r}")
        return session

    @app.get("/scenario")
    def get_scenario():
        return scenario_to_doc(scenario)

    @app.get("/categories")
    def get_categories():
        return [
            {"id": c.id, "name": c.name, "kind": c.kind}
            for c in scenario.matrix.categories
        ]

    @app.get("/services")
    def get_services(category: str | None = None):
        doc = scenario_to_doc(scenario)
        offers = doc["offers"]
        if category is not None:
            scenario.matrix.category(category)  # 422 if unknown
            offers = [o for o in offers if o["category_id"] == category]
        return offers

    @app.post("/plans", status_code=201)
    def create_plan(body: PlanRequestBody):
        if not scenario.matrix.categories:
            raise ValidationError("scenario defines no categories")
        request = planner.PlanRequest(
            deadline=body.deadline if body.deadline is not None else scenario.deadline,
            fc_order=tuple(body.fc_order) if body.fc_order is not None else scenario.fc_order,
            nc_set=tuple(body.nc_set) if body.nc_set is not None else scenario.nc_set,
            constraints=scenario.constraints,
            precedence_template=scenario.precedence_template,
            search_mode=body.search_mode or planner.ALL_PERMUTATIONS,
            candidate_cap=body.candidate_cap or planner.DEFAULT_CANDIDATE_CAP,
        )
        for cid in request.categories:
            scenario.matrix.category(cid)
        session = PlanSession(
            id=f"s{next(counter)}", request=request, interactive=body.interactive)
        with registry_lock:
            sessions[session.id] = session
        with session.lock:
            _run_session(session, scenario)
        return session_doc(session)

    @app.get("/plans/{session_id}")
    def get_plan(session_id: str):
        return session_doc(get_session(session_id))

    @app.post("/plans/{session_id}/negotiation")
    def post_negotiation(session_id: str, body: NegotiationBody):
        session = get_session(session_id)
        with session.lock:
            if session.state != AWAITING_NEGOTIATION:
                raise HTTPException(
                    status_code=409,
                    detail=f"session is {session.state}, not awaiting negotiation")
            session.decisions.append(planner.NegotiationDecision(
                withdrawn=tuple(body.withdrawn), allow_fixed=body.allow_fixed))
            session.state = RUNNING
            try:
                _run_session(session, scenario)
            except ValidationError:
                session.decisions.pop()
                session.state = AWAITING_NEGOTIATION
                raise
        return session_doc(session)

    @app.post("/plans/{session_id}/choice")
    def post_choice(session_id: str, body: ChoiceBody):
        session = get_session(session_id)
        with session.lock:
            if session.state != AWAITING_TIE_CHOICE:
                raise HTTPException(
                    status_code=409,
                    detail=f"session is {session.state}, not awaiting a tie choice")
            session.choice = body.candidate
            session.state = RUNNING
            try:
                _run_session(session, scenario)
            except ValidationError:
                session.choice = None
                session.state = AWAITING_TIE_CHOICE
                raise
        return session_doc(session)

    @app.post("/plans/{session_id}/compose")
    def post_compose(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if session.state != DONE or session.outcome.selected is None:
                raise HTTPException(status_code=409,
                                    detail="session has no selected plan to compose")
            session.itinerary = composer.compose(session.outcome.selected)
            return composer.itinerary_doc(session.itinerary)

    @app.get("/plans/{session_id}/curve")
    def get_curve(session_id: str):
        session = get_session(session_id)
        if session.state != DONE or session.outcome.selected is None:
            raise HTTPException(status_code=409,
                                detail="session has no selected plan")
        selected = session.outcome.selected
        completion = selected.completion
        points = []
        for step in range(-80, 81):
            z = step * 0.05
            points.append({"z": z, "phi": normal_cdf(z)})
        return {
            "degenerate": completion.z_value is None,
            "z_value": completion.z_value,
            "probability": completion.probability,
            "project_duration": selected.analysis.project_duration,
            "std_dev": selected.analysis.std_dev,
            "deadline": completion.deadline,
            "points": points,
        }

    @app.get("/availability")
    def get_availability():
        _, empty = available_submatrix(scenario.matrix, scenario.constraints)
        return {"empty_categories": list(empty)}

    return app
