"""Deadline-constrained composition search.

Generates category orders (fixed prefix + arrangements of the free
categories), enumerates one-offer-per-category combinations, checks each
against the deadline and per-slot availability, pools feasible candidates
across every attempted order, and picks the one most likely to finish on
time. When nothing is feasible the client is asked to withdraw categories.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

from . import pert
from .errors import ValidationError
from .registry import ConstraintSet, ServiceMatrix, available_submatrix

NO_BACKTRACKING = "no_backtracking"
ROTATIONS_ONLY = "rotations_only"
ALL_PERMUTATIONS = "all_permutations"
SEARCH_MODES = (NO_BACKTRACKING, ROTATIONS_ONLY, ALL_PERMUTATIONS)

DEFAULT_CANDIDATE_CAP = 10_000
PROB_TOL = 1e-9


@dataclass(frozen=True)
class PlanRequest:
    deadline: float
    fc_order: tuple[str, ...]
    nc_set: tuple[str, ...]
    constraints: ConstraintSet = ConstraintSet()
    precedence_template: tuple[tuple[str, str], ...] = ()
    search_mode: str = ALL_PERMUTATIONS
    candidate_cap: int = DEFAULT_CANDIDATE_CAP

    def __post_init__(self):
        if self.deadline <= 0:
            raise ValidationError(f"deadline must be > 0, got {self.deadline}")
        if self.search_mode not in SEARCH_MODES:
            raise ValidationError(f"unknown search_mode {self.search_mode!r}")
        if self.candidate_cap < 1:
            raise ValidationError(f"candidate_cap must be >= 1, got {self.candidate_cap}")
        overlap = set(self.fc_order) & set(self.nc_set)
        if overlap:
            raise ValidationError(f"categories in both fixed and free sets: {sorted(overlap)}")
        if not self.fc_order and not self.nc_set:
            raise ValidationError("request names no categories")

    @property
    def categories(self) -> tuple[str, ...]:
        return self.fc_order + self.nc_set


@dataclass(frozen=True)
class Combination:
    category_order: tuple[str, ...]
    choices: tuple[tuple[str, str], ...]  # (category_id, service_id) per slot

    def service_ids(self) -> tuple[str, ...]:
        picked = dict(self.choices)
        return tuple(picked[c] for c in self.category_order)


@dataclass(frozen=True)
class CandidatePlan:
    combination: Combination
    analysis: pert.ScheduleAnalysis
    slots: tuple[tuple[str, float, float], ...]  # (category_id, start, end)
    completion: pert.CompletionProbability | None = None

    @property
    def probability(self) -> float:
        if self.completion is None:
            raise ValidationError("candidate not evaluated yet")
        return self.completion.probability


@dataclass(frozen=True)
class Infeasibility:
    category_id: str | None
    reason: str  # "deadline" or "availability"
    detail: str
    slot: tuple[float, float] | None = None


@dataclass(frozen=True)
class NegotiationPrompt:
    withdrawable: tuple[str, ...]
    diagnostics: tuple[tuple[str, str], ...]  # (category_id, reason detail)


@dataclass(frozen=True)
class NegotiationDecision:
    withdrawn: tuple[str, ...] = ()
    allow_fixed: bool = False


@dataclass(frozen=True)
class FailureReport:
    reasons: tuple[tuple[str, str], ...]  # (category_id, reason detail)
    orders_tried: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class PlanOutcome:
    status: str  # selected | tie | negotiation_needed | failure
    selected: CandidatePlan | None = None
    tie: tuple[CandidatePlan, ...] = ()
    prompt: NegotiationPrompt | None = None
    failure: FailureReport | None = None
    orders_tried: tuple[tuple[str, ...], ...] = ()
    truncated: bool = False
    transcript: tuple = ()


class EmptyCategoryError(ValidationError):
    def __init__(self, category_id):
        self.category_id = category_id
        super().__init__(f"no available service in category {category_id!r}")


def auto_decline(prompt: NegotiationPrompt) -> NegotiationDecision:
    """Negotiator for non-interactive runs: never withdraws anything."""
    return NegotiationDecision(())


def generate_category_orders(fc_order, nc_order, mode=ALL_PERMUTATIONS):
    """Deterministic order stream: identity, left-rotations, then (in
    all_permutations mode) every remaining arrangement lexicographically."""
    fc = tuple(fc_order)
    nc = tuple(nc_order)
    orders = [fc + nc]
    if mode == NO_BACKTRACKING or len(nc) <= 1:
        return orders
    seen = {nc}
    for shift in range(1, len(nc)):
        rotated = nc[shift:] + nc[:shift]
        if rotated not in seen:
            seen.add(rotated)
            orders.append(fc + rotated)
    if mode == ALL_PERMUTATIONS:
        for perm in itertools.permutations(sorted(nc)):
            if perm not in seen:
                seen.add(perm)
                orders.append(fc + perm)
    return orders


def enumerate_combinations(matrix: ServiceMatrix, order, cap=DEFAULT_CANDIDATE_CAP):
    """Cartesian product of offers, one per category, in lexicographic
    service-id order. Returns (combinations, truncated)."""
    columns = []
    for cat_id in order:
        offers = sorted(matrix.column(cat_id), key=lambda o: o.id)
        if not offers:
            raise EmptyCategoryError(cat_id)
        columns.append([o.id for o in offers])
    combos = []
    truncated = False
    for picked in itertools.product(*columns):
        if len(combos) >= cap:
            truncated = True
            break
        combos.append(Combination(tuple(order), tuple(zip(order, picked))))
    return combos, truncated


def schedule_and_check(combination: Combination, matrix: ServiceMatrix,
                       request: PlanRequest):
    """Build the combination's activity network, run the schedule pass, and
    accept only if it meets the deadline and every slot is available.

    Returns a CandidatePlan (not yet evaluated) or the first Infeasibility.
    The network is a serial chain in category order unless a precedence
    template is given, in which case the template defines the precedence.
    """
    offers = {cat: matrix.offer(sid) for cat, sid in combination.choices}
    activities = [
        pert.Activity(id=cat, label=offers[cat].name, estimate=offers[cat].estimate)
        for cat in combination.category_order
    ]
    if request.precedence_template:
        edges = [
            e for e in request.precedence_template
            if e[0] in offers and e[1] in offers
        ]
    else:
        edges = list(zip(combination.category_order, combination.category_order[1:]))
    analysis = pert.analyze(pert.build_network(activities, edges))

    if analysis.project_duration > request.deadline:
        return Infeasibility(
            category_id=None,
            reason="deadline",
            detail=(f"duration {analysis.project_duration:g} exceeds "
                    f"deadline {request.deadline:g}"),
        )

    epoch = request.constraints.plan_epoch
    slots = []
    for cat in combination.category_order:
        start = epoch + analysis.earliest_start[cat]
        end = epoch + analysis.earliest_finish[cat]
        slots.append((cat, start, end))
        if not _slot_available(offers[cat].windows, start, end):
            return Infeasibility(
                category_id=cat,
                reason="availability",
                detail=(f"service {offers[cat].id} has no window covering "
                        f"[{start:g}, {end:g})"),
                slot=(start, end),
            )
    return CandidatePlan(combination, analysis, tuple(slots))


def _slot_available(windows, start, end, tol=1e-9):
    for ws, we in windows:
        if ws - tol <= start and end <= we + tol:
            return True
    return False


def evaluate(plan: CandidatePlan, deadline: float) -> CandidatePlan:
    return replace(plan, completion=pert.completion_probability(plan.analysis, deadline))


def select(candidates, chooser=None) -> PlanOutcome:
    """Pick max probability, then min duration, then smallest service-id tuple.

    With a chooser, remaining ties after the duration rule are handed back as
    a tie outcome (unless the chooser resolves them by index).
    """
    pool = list(candidates)
    if not pool:
        raise ValidationError("select() requires at least one candidate")
    best_prob = max(c.probability for c in pool)
    pool = [c for c in pool if c.probability >= best_prob - PROB_TOL]
    best_dur = min(c.analysis.project_duration for c in pool)
    pool = [c for c in pool if c.analysis.project_duration <= best_dur + PROB_TOL]

    # The same set of choices can surface under several category orders with
    # equal value; that is one plan, not a tie. Keep the rank-smallest.
    reps: dict[tuple, tuple] = {}
    for c in pool:
        key = tuple(sorted(c.combination.choices))
        rank = (c.combination.service_ids(), c.combination.category_order)
        if key not in reps or rank < reps[key][0]:
            reps[key] = (rank, c)
    ties = [c for _, c in sorted(reps.values(), key=lambda item: item[0])]
    if len(ties) > 1 and chooser is not None:
        idx = chooser(ties)
        if idx is None:
            return PlanOutcome(status="tie", tie=tuple(ties))
        if not 0 <= idx < len(ties):
            raise ValidationError(f"tie choice {idx} out of range 0..{len(ties) - 1}")
        return PlanOutcome(status="selected", selected=ties[idx])
    return PlanOutcome(status="selected", selected=ties[0])


def _chain_search(order, matrix: ServiceMatrix, request: PlanRequest,
                  reasons: dict):
    """Pruned depth-first enumeration for the serial-chain network shape.

    For a chain the schedule is just cumulative expected times, so slots and
    the deadline can be checked incrementally and infeasible subtrees skipped
    wholesale. Returns light records: (choices, duration, variance, slots).
    """
    columns = []
    for cat_id in order:
        offers = sorted(matrix.column(cat_id), key=lambda o: o.id)
        if not offers:
            raise EmptyCategoryError(cat_id)
        columns.append((cat_id, [
            (o.id, pert.expected_time(o.estimate),
             pert.activity_variance(o.estimate), o.windows)
            for o in offers
        ]))

    found = []
    truncated = False
    epoch = request.constraints.plan_epoch
    depth_total = len(columns)
    picks: list[tuple[str, str]] = []
    slots: list[tuple[str, float, float]] = []

    def descend(depth, clock, var):
        nonlocal truncated
        if truncated:
            return
        if depth == depth_total:
            if len(found) >= request.candidate_cap:
                truncated = True
                return
            found.append((tuple(picks), clock, var, tuple(slots)))
            return
        cat_id, offers = columns[depth]
        for sid, duration, variance, windows in offers:
            finish = clock + duration
            if finish > request.deadline:
                reasons.setdefault("(deadline)", (
                    f"duration exceeds deadline {request.deadline:g}"))
                continue
            start_abs, end_abs = epoch + clock, epoch + finish
            if not _slot_available(windows, start_abs, end_abs):
                reasons.setdefault(cat_id, (
                    f"service {sid} has no window covering "
                    f"[{start_abs:g}, {end_abs:g})"))
                continue
            picks.append((cat_id, sid))
            slots.append((cat_id, start_abs, end_abs))
            descend(depth + 1, finish, var + variance)
            picks.pop()
            slots.pop()

    descend(0, 0.0, 0.0)
    return found, truncated


def _light_probability(duration, variance, deadline):
    if variance > 0.0:
        return pert.normal_cdf((deadline - duration) / math.sqrt(variance))
    return 1.0 if duration <= deadline else 0.0


def _select_from_light(light, matrix, request, chooser):
    """Apply select()'s rules to light chain records, rebuilding full
    CandidatePlans only for the final shortlist."""
    scored = [
        (order, choices, duration, variance,
         _light_probability(duration, variance, request.deadline))
        for order, (choices, duration, variance, _slots) in light
    ]
    best_prob = max(s[4] for s in scored)
    scored = [s for s in scored if s[4] >= best_prob - PROB_TOL]
    best_dur = min(s[2] for s in scored)
    scored = [s for s in scored if s[2] <= best_dur + PROB_TOL]
    distinct = {}
    for order, choices, *_ in scored:
        ids = tuple(sid for _, sid in choices)
        distinct.setdefault((ids, order), choices)
    shortlist = []
    for key in sorted(distinct):
        order = key[1]
        combo = Combination(order, distinct[key])
        candidate = schedule_and_check(combo, matrix, request)
        if not isinstance(candidate, CandidatePlan):  # pragma: no cover
            raise ValidationError(f"shortlisted combination became infeasible: {candidate}")
        shortlist.append(evaluate(candidate, request.deadline))
    return select(shortlist, chooser=chooser)


def plan(request: PlanRequest, matrix: ServiceMatrix, negotiator=None,
         chooser=None) -> PlanOutcome:
    """Run the full search.

    ``negotiator`` maps a NegotiationPrompt to a NegotiationDecision; if it is
    None the search stops at ``negotiation_needed`` and the caller decides.
    ``chooser`` (see select) enables external tie resolution.
    """
    withdrawn: set[str] = set()
    transcript = []
    all_orders: list[tuple[str, ...]] = []
    max_rounds = len(request.categories)

    for _ in range(max_rounds + 1):
        fc = tuple(c for c in request.fc_order if c not in withdrawn)
        nc = tuple(c for c in request.nc_set if c not in withdrawn)
        active = fc + nc
        if not active:
            return _failure(
                [(c, "withdrawn") for c in sorted(withdrawn)], all_orders, transcript)

        submatrix, empty = available_submatrix(matrix, request.constraints)
        empty_active = [c for c in empty if c in active]

        use_chain = not request.precedence_template
        candidates = []
        light = []
        reasons: dict[str, str] = {}
        truncated = False
        if not empty_active:
            for order in generate_category_orders(fc, nc, request.search_mode):
                all_orders.append(order)
                if use_chain:
                    found, was_truncated = _chain_search(
                        order, submatrix, request, reasons)
                    light.extend((order, record) for record in found)
                else:
                    combos, was_truncated = enumerate_combinations(
                        submatrix, order, request.candidate_cap)
                    for combo in combos:
                        result = schedule_and_check(combo, submatrix, request)
                        if isinstance(result, CandidatePlan):
                            candidates.append(evaluate(result, request.deadline))
                        else:
                            key = result.category_id or "(deadline)"
                            reasons.setdefault(key, result.detail)
                truncated = truncated or was_truncated
        else:
            for cat in empty_active:
                reasons[cat] = "no service passes the availability/constraint filter"

        if light or candidates:
            if light:
                outcome = _select_from_light(light, submatrix, request, chooser)
            else:
                outcome = select(candidates, chooser=chooser)
            return replace(outcome, orders_tried=tuple(all_orders),
                           truncated=truncated, transcript=tuple(transcript))

        prompt = _build_prompt(request, reasons, empty_active, nc)
        if negotiator is None:
            return PlanOutcome(status="negotiation_needed", prompt=prompt,
                               orders_tried=tuple(all_orders),
                               transcript=tuple(transcript))
        decision = negotiator(prompt)
        transcript.append((prompt, decision))
        if not decision.withdrawn:
            return _failure(sorted(reasons.items()), all_orders, transcript)
        _validate_decision(request, prompt, decision)
        withdrawn.update(decision.withdrawn)

    return _failure([("(search)", "negotiation round limit reached")],
                    all_orders, transcript)


def _build_prompt(request, reasons, empty_active, nc):
    implicated = set(empty_active)
    implicated.update(k for k in reasons if not k.startswith("("))
    if not implicated:
        # Deadline-only failures implicate no single category; offer the
        # free categories for withdrawal to shorten the chain.
        implicated.update(nc)
    withdrawable = tuple(sorted(implicated))
    return NegotiationPrompt(withdrawable=withdrawable,
                             diagnostics=tuple(sorted(reasons.items())))


def _validate_decision(request, prompt, decision):
    extra = set(decision.withdrawn) - set(prompt.withdrawable)
    if extra:
        raise ValidationError(f"withdrawal of unprompted categories: {sorted(extra)}")
    fixed = set(decision.withdrawn) & set(request.fc_order)
    if fixed and not decision.allow_fixed:
        raise ValidationError(
            f"withdrawing fixed categories {sorted(fixed)} requires allow_fixed")


def _failure(reasons, orders, transcript):
    return PlanOutcome(
        status="failure",
        failure=FailureReport(reasons=tuple(reasons), orders_tried=tuple(orders)),
        orders_tried=tuple(orders),
        transcript=tuple(transcript),
    )


def plan_report(outcome: PlanOutcome, request: PlanRequest) -> dict:
    """Deterministic report document for the CLI, API, and transcripts."""
    doc = {
        "status": outcome.status,
        "deadline": request.deadline,
        "search_mode": request.search_mode,
        "orders_tried": [list(o) for o in outcome.orders_tried],
        "truncated": outcome.truncated,
        "negotiation": [
            {
                "prompt": {
                    "withdrawable": list(p.withdrawable),
                    "diagnostics": [list(d) for d in p.diagnostics],
                },
                "decision": {
                    "withdrawn": list(d.withdrawn),
                    "allow_fixed": d.allow_fixed,
                },
            }
            for p, d in outcome.transcript
        ],
    }
    if outcome.selected is not None:
        doc["plan"] = _candidate_doc(outcome.selected)
    if outcome.tie:
        doc["tie"] = [_candidate_doc(c) for c in outcome.tie]
    if outcome.prompt is not None:
        doc["prompt"] = {
            "withdrawable": list(outcome.prompt.withdrawable),
            "diagnostics": [list(d) for d in outcome.prompt.diagnostics],
        }
    if outcome.failure is not None:
        doc["failure"] = {
            "reasons": [list(r) for r in outcome.failure.reasons],
            "orders_tried": [list(o) for o in outcome.failure.orders_tried],
        }
    return doc


def _candidate_doc(plan: CandidatePlan) -> dict:
    completion = plan.completion
    return {
        "category_order": list(plan.combination.category_order),
        "choices": {cat: sid for cat, sid in plan.combination.choices},
        "slots": [
            {"category_id": cat, "start": start, "end": end}
            for cat, start, end in plan.slots
        ],
        "project_duration": plan.analysis.project_duration,
        "critical_path": list(plan.analysis.critical_path),
        "critical_variance": plan.analysis.critical_variance,
        "std_dev": plan.analysis.std_dev,
        "z_value": None if completion is None else completion.z_value,
        "probability": None if completion is None else completion.probability,
        "total_float": dict(sorted(plan.analysis.total_float.items())),
    }
