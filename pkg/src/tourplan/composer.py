"""Execution of a selected plan against mock service endpoints.

Invokes each chosen service once, in slot order. Any failure rolls back the
bookings already confirmed, so an itinerary is all-or-nothing.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

from .errors import ValidationError
from .planner import CandidatePlan

CONFIRMED = "confirmed"
ROLLED_BACK = "rolled_back"
FAILED = "failed"


class InvocationError(RuntimeError):
    """Raised by an invoker to signal that a service call failed."""


@dataclass(frozen=True)
class BookingRecord:
    service_id: str
    category_id: str
    slot: tuple[float, float]
    status: str
    confirmation: str = ""


@dataclass(frozen=True)
class Itinerary:
    records: tuple[BookingRecord, ...]
    ok: bool
    failed_service_id: str | None = None


def default_invoker(service_id: str, category_id: str, slot) -> str:
    """Always-succeeding mock endpoint with a stable confirmation code."""
    token = f"{service_id}|{category_id}|{slot[0]:g}|{slot[1]:g}"
    return hashlib.sha256(token.encode()).hexdigest()[:12].upper()


def compose(plan: CandidatePlan, invoker=default_invoker) -> Itinerary:
    """Book every service in the plan, rolling back on the first failure."""
    if not plan.slots:
        raise ValidationError("cannot compose an empty plan")
    choices = dict(plan.combination.choices)
    records: list[BookingRecord] = []
    for category_id, start, end in sorted(plan.slots, key=lambda s: (s[1], s[0])):
        service_id = choices[category_id]
        try:
            code = invoker(service_id, category_id, (start, end))
        except InvocationError as exc:
            rolled = [replace(r, status=ROLLED_BACK) for r in records]
            rolled.append(BookingRecord(service_id, category_id, (start, end),
                                        FAILED, str(exc)))
            return Itinerary(tuple(rolled), ok=False, failed_service_id=service_id)
        records.append(BookingRecord(service_id, category_id, (start, end),
                                     CONFIRMED, code))
    return Itinerary(tuple(records), ok=True)


def itinerary_doc(itinerary: Itinerary) -> dict:
    return {
        "ok": itinerary.ok,
        "failed_service_id": itinerary.failed_service_id,
        "records": [
            {
                "service_id": r.service_id,
                "category_id": r.category_id,
                "slot": {"start": r.slot[0], "end": r.slot[1]},
                "status": r.status,
                "confirmation": r.confirmation,
            }
            for r in itinerary.records
        ],
    }
