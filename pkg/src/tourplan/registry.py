"""Service registry: the category/offer matrix and its availability filter."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import intervals
from .errors import UnknownIdError, ValidationError
from .pert import ThreePointEstimate

FIXED = "fixed"
NON_FIXED = "non_fixed"


@dataclass(frozen=True)
class Category:
    id: str
    name: str
    kind: str  # "fixed" or "non_fixed"

    def __post_init__(self):
        if self.kind not in (FIXED, NON_FIXED):
            raise ValidationError(f"category kind must be fixed|non_fixed, got {self.kind!r}")


@dataclass(frozen=True)
class AvailabilityWindow:
    start: float
    end: float

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise ValidationError(
                f"window must satisfy 0 <= start < end, got [{self.start}, {self.end})"
            )


@dataclass(frozen=True)
class ServiceOffer:
    id: str
    category_id: str
    name: str
    estimate: ThreePointEstimate
    cost: float = 0.0
    capacity: int = 1
    windows: tuple[tuple[float, float], ...] = ()
    attributes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.cost < 0:
            raise ValidationError(f"cost must be >= 0, got {self.cost}")
        if self.capacity < 1:
            raise ValidationError(f"capacity must be >= 1, got {self.capacity}")
        object.__setattr__(self, "windows", intervals.normalize(self.windows))


@dataclass(frozen=True)
class ConstraintSet:
    max_cost: float | None = None  # None = unbounded
    party_size: int = 1
    plan_epoch: float = 0.0

    def __post_init__(self):
        if self.party_size < 1:
            raise ValidationError(f"party_size must be >= 1, got {self.party_size}")


@dataclass(frozen=True)
class ServiceMatrix:
    """Ordered categories (columns) with a list of offers per category.

    Columns may be ragged; an empty column in a filtered matrix is the signal
    that triggers client negotiation.
    """

    categories: tuple[Category, ...]
    offers: dict[str, tuple[ServiceOffer, ...]]

    def __post_init__(self):
        ids = [c.id for c in self.categories]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate category ids")
        for cat_id, column in self.offers.items():
            if cat_id not in ids:
                raise UnknownIdError("category", cat_id)
            for offer in column:
                if offer.category_id != cat_id:
                    raise ValidationError(
                        f"offer {offer.id!r} filed under {cat_id!r} but claims "
                        f"category {offer.category_id!r}"
                    )

    def category(self, category_id: str) -> Category:
        for c in self.categories:
            if c.id == category_id:
                return c
        raise UnknownIdError("category", category_id)

    def column(self, category_id: str) -> tuple[ServiceOffer, ...]:
        self.category(category_id)
        return self.offers.get(category_id, ())

    def offer(self, service_id: str) -> ServiceOffer:
        for column in self.offers.values():
            for o in column:
                if o.id == service_id:
                    return o
        raise UnknownIdError("service", service_id)


def matrix_of(categories, offers) -> ServiceMatrix:
    """Build a matrix from flat iterables of categories and offers."""
    cats = tuple(categories)
    matrix = ServiceMatrix(cats, {c.id: () for c in cats})
    for offer in offers:
        matrix = register(matrix, offer)
    return matrix


def register(matrix: ServiceMatrix, offer: ServiceOffer) -> ServiceMatrix:
    """Append an offer to its category column; a duplicate id replaces."""
    matrix.category(offer.category_id)
    new_offers = dict(matrix.offers)
    column = [o for o in new_offers.get(offer.category_id, ()) if o.id != offer.id]
    # Replacement keeps the column position stable when the id already existed.
    old = new_offers.get(offer.category_id, ())
    if len(column) != len(old):
        idx = [o.id for o in old].index(offer.id)
        column = list(old)
        column[idx] = offer
    else:
        column.append(offer)
    new_offers[offer.category_id] = tuple(column)
    return replace(matrix, offers=new_offers)


def block(matrix: ServiceMatrix, service_id: str, window) -> ServiceMatrix:
    """Subtract a time window from one service's availability."""
    target = matrix.offer(service_id)
    if isinstance(window, AvailabilityWindow):
        hole = (window.start, window.end)
    else:
        hole = (window[0], window[1])
    updated = replace(target, windows=intervals.subtract(target.windows, hole))
    new_offers = dict(matrix.offers)
    new_offers[target.category_id] = tuple(
        updated if o.id == service_id else o for o in new_offers[target.category_id]
    )
    return replace(matrix, offers=new_offers)


def available_submatrix(matrix: ServiceMatrix, constraints: ConstraintSet,
                        predicates=()) -> tuple[ServiceMatrix, tuple[str, ...]]:
    """Filter to offers that satisfy cost/capacity and have any availability.

    Returns the filtered matrix plus the ids of categories whose column went
    empty (the negotiation candidates). Slot-level time feasibility is the
    planner's job; this only drops offers that can never be used.
    """
    new_offers = {}
    empty = []
    for cat in matrix.categories:
        kept = []
        for offer in matrix.offers.get(cat.id, ()):
            if constraints.max_cost is not None and offer.cost > constraints.max_cost:
                continue
            if offer.capacity < constraints.party_size:
                continue
            if not offer.windows:
                continue
            if any(not pred(offer) for pred in predicates):
                continue
            kept.append(offer)
        new_offers[cat.id] = tuple(kept)
        if not kept:
            empty.append(cat.id)
    return replace(matrix, offers=new_offers), tuple(empty)
