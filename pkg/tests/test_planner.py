import json
import random

import pytest

from oracles import brute_force_plan, normal_cdf_oracle
from tourplan import (
    Category,
    ConstraintSet,
    ServiceOffer,
    ThreePointEstimate,
    ValidationError,
    block,
    matrix_of,
)
from tourplan.planner import (
    ALL_PERMUTATIONS,
    NO_BACKTRACKING,
    ROTATIONS_ONLY,
    CandidatePlan,
    Combination,
    EmptyCategoryError,
    Infeasibility,
    NegotiationDecision,
    PlanRequest,
    auto_decline,
    enumerate_combinations,
    evaluate,
    generate_category_orders,
    plan,
    plan_report,
    schedule_and_check,
    select,
)

MINIMA = ("C1-WS3", "C2-WS1", "C3-WS1", "C4-WS3", "C5-WS3", "C6-WS1")


def tour_request(scenario, **overrides):
    kwargs = dict(
        deadline=scenario.deadline,
        fc_order=scenario.fc_order,
        nc_set=scenario.nc_set,
        constraints=scenario.constraints,
        precedence_template=scenario.precedence_template,
    )
    kwargs.update(overrides)
    return PlanRequest(**kwargs)


def restrict_windows(matrix, service_prefix, keep):
    """Clamp every service whose id starts with the prefix to one window."""
    for cat in matrix.categories:
        for o in matrix.column(cat.id):
            if o.id.startswith(service_prefix):
                for ws, we in o.windows:
                    if ws < keep[0]:
                        matrix = block(matrix, o.id, (ws, min(we, keep[0])))
                for ws, we in matrix.offer(o.id).windows:
                    if we > keep[1]:
                        matrix = block(matrix, o.id, (max(ws, keep[1]), we))
    return matrix


class TestGenerateCategoryOrders:
    FC = ("C1", "C2", "C3")
    NC = ("C4", "C5", "C6")

    def test_first_rotation(self):
        orders = generate_category_orders(self.FC, self.NC, ROTATIONS_ONLY)
        assert orders[1] == ("C1", "C2", "C3", "C5", "C6", "C4")

    def test_identity_first(self):
        orders = generate_category_orders(self.FC, self.NC, ALL_PERMUTATIONS)
        assert orders[0] == self.FC + self.NC

    def test_rotation_count_equals_free_size(self):
        orders = generate_category_orders(self.FC, self.NC, ROTATIONS_ONLY)
        assert len(orders) == len(self.NC)
        assert len(set(orders)) == len(orders)

    def test_singleton_free_set(self):
        orders = generate_category_orders(self.FC, ("C4",), ALL_PERMUTATIONS)
        assert orders == [("C1", "C2", "C3", "C4")]

    def test_permutations_include_non_rotation(self):
        orders = generate_category_orders(self.FC, self.NC, ALL_PERMUTATIONS)
        assert ("C1", "C2", "C3", "C5", "C4", "C6") in orders
        assert len(orders) == 6
        assert len(set(orders)) == 6

    def test_fixed_prefix_everywhere(self):
        for order in generate_category_orders(self.FC, self.NC, ALL_PERMUTATIONS):
            assert order[:3] == self.FC

    def test_no_backtracking_is_identity_only(self):
        orders = generate_category_orders(self.FC, self.NC, NO_BACKTRACKING)
        assert orders == [self.FC + self.NC]


class TestEnumerateCombinations:
    def test_tour_matrix_product(self, tour_scenario):
        order = tour_scenario.fc_order + tour_scenario.nc_set
        combos, truncated = enumerate_combinations(tour_scenario.matrix, order)
        assert len(combos) == 729
        assert not truncated

    def test_single_offer_each(self):
        matrix = matrix_of(
            [Category("A", "a", "fixed"), Category("B", "b", "fixed")],
            [_offer("A-1", "A"), _offer("B-1", "B")],
        )
        combos, _ = enumerate_combinations(matrix, ("A", "B"))
        assert len(combos) == 1

    def test_empty_category_signal(self, tour_scenario):
        matrix = tour_scenario.matrix
        for o in list(matrix.column("C4")):
            matrix = block(matrix, o.id, (0, 100000))
        from tourplan.registry import available_submatrix
        filtered, empty = available_submatrix(matrix, ConstraintSet())
        assert empty == ("C4",)
        with pytest.raises(EmptyCategoryError, match="C4"):
            enumerate_combinations(filtered, tour_scenario.fc_order + tour_scenario.nc_set)

    def test_lexicographic_emission(self, tour_scenario):
        combos, _ = enumerate_combinations(
            tour_scenario.matrix, tour_scenario.fc_order + tour_scenario.nc_set)
        tuples = [c.service_ids() for c in combos]
        assert tuples == sorted(tuples)

    def test_cap_truncates(self, tour_scenario):
        combos, truncated = enumerate_combinations(
            tour_scenario.matrix, tour_scenario.fc_order + tour_scenario.nc_set,
            cap=10)
        assert len(combos) == 10
        assert truncated


def _offer(oid, cat, minutes=10, windows=((0, 100000),), triple=None):
    est = triple or (minutes, minutes, minutes)
    return ServiceOffer(id=oid, category_id=cat, name=oid,
                        estimate=ThreePointEstimate(*est), windows=windows)


class TestScheduleAndCheck:
    def minima_combo(self, scenario):
        order = scenario.fc_order + scenario.nc_set
        return Combination(order, tuple(zip(order, MINIMA)))

    def test_minima_chain_feasible(self, tour_scenario):
        request = tour_request(tour_scenario)
        result = schedule_and_check(self.minima_combo(tour_scenario),
                                    tour_scenario.matrix, request)
        assert isinstance(result, CandidatePlan)
        assert result.analysis.project_duration == 410
        starts = [s for _, s, _ in result.slots]
        assert starts == sorted(starts)

    def test_deadline_violation_reported(self, tour_scenario):
        request = tour_request(tour_scenario, deadline=100)
        result = schedule_and_check(self.minima_combo(tour_scenario),
                                    tour_scenario.matrix, request)
        assert isinstance(result, Infeasibility)
        assert result.reason == "deadline"
        assert "410" in result.detail and "100" in result.detail

    def test_availability_violation_names_category(self, tour_scenario):
        matrix = tour_scenario.matrix
        for o in list(matrix.column("C4")):
            matrix = block(matrix, o.id, (150, 400))
        request = tour_request(tour_scenario)
        result = schedule_and_check(self.minima_combo(tour_scenario), matrix, request)
        assert isinstance(result, Infeasibility)
        assert result.reason == "availability"
        assert result.category_id == "C4"
        assert result.slot == (180, 265)

    def test_precedence_template_builds_parallel_branches(self):
        cats = [Category(c, c, "fixed") for c in "abcd"]
        offers = [_offer(f"{c}-1", c, minutes=m)
                  for c, m in zip("abcd", (5, 10, 3, 2))]
        matrix = matrix_of(cats, offers)
        template = (("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"))
        request = PlanRequest(deadline=100, fc_order=("a", "b", "c", "d"),
                              nc_set=(), precedence_template=template)
        combo = Combination(("a", "b", "c", "d"),
                            tuple((c, f"{c}-1") for c in "abcd"))
        result = schedule_and_check(combo, matrix, request)
        assert isinstance(result, CandidatePlan)
        assert result.analysis.project_duration == 17
        assert result.analysis.total_float["c"] == pytest.approx(7)


class TestEvaluate:
    def test_step_rule(self, tour_scenario):
        request = tour_request(tour_scenario)
        order = tour_scenario.fc_order + tour_scenario.nc_set
        combo = Combination(order, tuple(zip(order, MINIMA)))
        candidate = schedule_and_check(combo, tour_scenario.matrix, request)
        assert evaluate(candidate, 450).probability == 1.0

    def test_z_two(self):
        matrix = matrix_of([Category("A", "a", "fixed")],
                           [_offer("A-1", "A", triple=(400, 430, 460))])
        request = PlanRequest(deadline=450, fc_order=("A",), nc_set=())
        combo = Combination(("A",), (("A", "A-1"),))
        candidate = evaluate(schedule_and_check(combo, matrix, request), 450)
        assert candidate.probability == pytest.approx(0.9772, abs=1e-4)
        assert candidate.completion.z_value == pytest.approx(2.0, abs=1e-9)


def _fake_candidate(prob, duration, ids=("X-1",)):
    # Bypass the full pipeline: build a minimal evaluated candidate.
    matrix = matrix_of([Category("X", "x", "fixed")],
                       [_offer(ids[0], "X", minutes=duration)])
    request = PlanRequest(deadline=duration * 2 + 1, fc_order=("X",), nc_set=())
    combo = Combination(("X",), (("X", ids[0]),))
    candidate = schedule_and_check(combo, matrix, request)
    from dataclasses import replace
    from tourplan.pert import CompletionProbability
    return replace(candidate,
                   completion=CompletionProbability(duration * 2, 0.0, prob))


class TestSelect:
    def test_probability_then_duration(self):
        cands = [
            _fake_candidate(0.8, 400, ("A-1",)),
            _fake_candidate(0.95, 420, ("B-1",)),
            _fake_candidate(0.95, 410, ("C-1",)),
        ]
        outcome = select(cands)
        assert outcome.selected.combination.service_ids() == ("C-1",)

    def test_single_candidate(self):
        cand = _fake_candidate(0.3, 100)
        assert select([cand]).selected is cand

    def test_lexicographic_final_tiebreak(self):
        cands = [_fake_candidate(0.9, 100, ("B-1",)),
                 _fake_candidate(0.9, 100, ("A-1",))]
        outcome = select(cands)
        assert outcome.selected.combination.service_ids() == ("A-1",)

    def test_chooser_gets_tie(self):
        cands = [_fake_candidate(0.9, 100, ("B-1",)),
                 _fake_candidate(0.9, 100, ("A-1",))]
        outcome = select(cands, chooser=lambda ties: None)
        assert outcome.status == "tie"
        assert len(outcome.tie) == 2
        outcome = select(cands, chooser=lambda ties: 1)
        assert outcome.selected.combination.service_ids() == ("B-1",)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            select([])


class TestPlan:
    def test_tour_scenario_optimum(self, tour_scenario):
        request = tour_request(tour_scenario)
        outcome = plan(request, tour_scenario.matrix, negotiator=auto_decline)
        assert outcome.status == "selected"
        assert outcome.selected.analysis.project_duration == 410
        assert outcome.selected.probability == 1.0
        assert outcome.selected.combination.service_ids() == MINIMA

    def test_backtracks_around_blocked_category(self, tour_scenario):
        matrix = tour_scenario.matrix
        for o in list(matrix.column("C4")):
            matrix = block(matrix, o.id, (150, 320))
        request = tour_request(tour_scenario)
        outcome = plan(request, matrix, negotiator=auto_decline)
        assert outcome.status == "selected"
        order = outcome.selected.combination.category_order
        nc_positions = {c: order.index(c) for c in ("C4", "C5", "C6")}
        assert any(nc_positions[c] < nc_positions["C4"] for c in ("C5", "C6"))
        # The chosen C4 slot really is open.
        slots = {c: (s, e) for c, s, e in outcome.selected.slots}
        s, e = slots["C4"]
        windows = matrix.offer(dict(outcome.selected.combination.choices)["C4"]).windows
        assert any(ws <= s and e <= we for ws, we in windows)

    def test_rotations_only_misses_non_rotation_order(self, tour_scenario):
        matrix = tour_scenario.matrix
        matrix = restrict_windows(matrix, "C5", (170, 215))
        matrix = restrict_windows(matrix, "C4", (200, 295))
        matrix = restrict_windows(matrix, "C6", (280, 100000))
        request = tour_request(tour_scenario, search_mode=ROTATIONS_ONLY)
        outcome = plan(request, matrix, negotiator=auto_decline)
        assert outcome.status == "failure"

        request = tour_request(tour_scenario, search_mode=ALL_PERMUTATIONS)
        outcome = plan(request, matrix, negotiator=auto_decline)
        assert outcome.status == "selected"
        order = outcome.selected.combination.category_order
        assert order[3:] == ("C5", "C4", "C6")

    def test_unreachable_deadline_prompts_then_fails(self, tour_scenario):
        request = tour_request(tour_scenario, deadline=100)
        outcome = plan(request, tour_scenario.matrix)
        assert outcome.status == "negotiation_needed"
        assert outcome.prompt.withdrawable

        outcome = plan(request, tour_scenario.matrix, negotiator=auto_decline)
        assert outcome.status == "failure"
        assert outcome.failure.orders_tried

    def test_negotiation_withdrawal_replans(self, tour_scenario):
        matrix = tour_scenario.matrix
        for o in list(matrix.column("C4")):
            matrix = block(matrix, o.id, (0, 100000))
        prompts = []

        def withdraw_c4(prompt):
            prompts.append(prompt)
            return NegotiationDecision(withdrawn=("C4",))

        request = tour_request(tour_scenario)
        outcome = plan(request, matrix, negotiator=withdraw_c4)
        assert prompts and "C4" in prompts[0].withdrawable
        assert outcome.status == "selected"
        chosen = dict(outcome.selected.combination.choices)
        assert "C4" not in chosen
        assert outcome.selected.analysis.project_duration == 325
        assert len(outcome.transcript) == 1

    def test_fixed_withdrawal_needs_flag(self, tour_scenario):
        matrix = tour_scenario.matrix
        for o in list(matrix.column("C1")):
            matrix = block(matrix, o.id, (0, 100000))
        request = tour_request(tour_scenario)
        with pytest.raises(ValidationError, match="allow_fixed"):
            plan(request, matrix,
                 negotiator=lambda p: NegotiationDecision(withdrawn=("C1",)))
        outcome = plan(
            request, matrix,
            negotiator=lambda p: NegotiationDecision(withdrawn=("C1",),
                                                     allow_fixed=True))
        assert outcome.status == "selected"

    def test_unprompted_withdrawal_rejected(self, tour_scenario):
        request = tour_request(tour_scenario, deadline=100)
        with pytest.raises(ValidationError, match="unprompted"):
            plan(request, tour_scenario.matrix,
                 negotiator=lambda p: NegotiationDecision(withdrawn=("C9",)))

    def test_determinism_byte_identical(self, tour_scenario):
        request = tour_request(tour_scenario)
        reports = []
        for _ in range(2):
            outcome = plan(request, tour_scenario.matrix, negotiator=auto_decline)
            reports.append(json.dumps(plan_report(outcome, request), sort_keys=True))
        assert reports[0] == reports[1]

    def test_soundness_recheck(self, tour_scenario):
        matrix = tour_scenario.matrix
        for o in list(matrix.column("C4")):
            matrix = block(matrix, o.id, (150, 320))
        request = tour_request(tour_scenario)
        outcome = plan(request, matrix, negotiator=auto_decline)
        selected = outcome.selected
        assert selected.analysis.project_duration <= request.deadline
        choices = dict(selected.combination.choices)
        for cat, start, end in selected.slots:
            windows = matrix.offer(choices[cat]).windows
            assert any(ws - 1e-9 <= start and end <= we + 1e-9
                       for ws, we in windows)


def _random_instance(rng):
    n_cats = rng.randint(2, 4)
    cats, offers = [], []
    for ci in range(n_cats):
        cid = f"K{ci}"
        cats.append(Category(cid, cid, "non_fixed" if ci else "fixed"))
        for si in range(rng.randint(1, 3)):
            o = rng.uniform(5, 40)
            m = o + rng.uniform(0, 20)
            p = m + rng.uniform(0, 25)
            if rng.random() < 0.5:
                windows = ((0, 10000),)
            else:
                a = rng.uniform(0, 60)
                windows = ((0, a), (a + rng.uniform(5, 80), 10000))
            offers.append(ServiceOffer(
                id=f"K{ci}-S{si}", category_id=cid, name=f"K{ci}-S{si}",
                estimate=ThreePointEstimate(o, m, p), windows=windows))
    matrix = matrix_of(cats, offers)
    fc = ("K0",)
    nc = tuple(c.id for c in cats[1:])
    deadline = rng.uniform(60, 260)
    return matrix, fc, nc, deadline


class TestOracleOptimality:
    @pytest.mark.parametrize("seed", range(20))
    def test_matches_brute_force(self, seed):
        rng = random.Random(1000 + seed)
        matrix, fc, nc, deadline = _random_instance(rng)
        best_prob, best_key = brute_force_plan(matrix, fc, nc, deadline)
        request = PlanRequest(deadline=deadline, fc_order=fc, nc_set=nc,
                              search_mode=ALL_PERMUTATIONS)
        outcome = plan(request, matrix, negotiator=auto_decline)
        if best_prob is None:
            assert outcome.status != "selected"
        else:
            assert outcome.status == "selected"
            assert outcome.selected.probability == pytest.approx(best_prob, abs=1e-9)
            assert (outcome.selected.combination.service_ids(),
                    outcome.selected.combination.category_order) == best_key
