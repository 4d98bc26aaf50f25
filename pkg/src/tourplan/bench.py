"""Randomized success-rate experiment: planning with and without reordering.

Each trial blocks some categories around their identity-order time slots and
runs the planner in several search modes on the same blocked registry, so a
mode can only win by reordering the free categories.
"""

from __future__ import annotations

import io
import random
import time
from dataclasses import dataclass, field

from . import planner, registry
from .errors import ValidationError
from .scenario import Scenario

DEFAULT_MODES = (planner.NO_BACKTRACKING, planner.ROTATIONS_ONLY,
                 planner.ALL_PERMUTATIONS)

CSV_HEADER = "trial,mode,success,orders_tried,wall_us,probability"


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: Scenario
    trials: int = 200
    block_prob: float = 0.2
    seed: int = 0
    modes: tuple[str, ...] = DEFAULT_MODES
    window_pad: float = 30.0
    block_categories: tuple[str, ...] | None = None  # None = the free categories

    def __post_init__(self):
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if not 0.0 <= self.block_prob <= 1.0:
            raise ValidationError(f"block_prob must be in [0,1], got {self.block_prob}")
        for mode in self.modes:
            if mode not in planner.SEARCH_MODES:
                raise ValidationError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class TrialResult:
    trial: int
    mode: str
    success: bool
    orders_tried: int
    wall_us: int
    probability: float | None
    absence_reason: str | None = None


@dataclass(frozen=True)
class ExperimentResult:
    rows: tuple[TrialResult, ...]
    success_rate: dict[str, float]
    mean_wall_us: dict[str, float]


def identity_slots(scenario: Scenario) -> dict[str, tuple[float, float]]:
    """Per-category slot of the fastest combination under the identity order."""
    order = scenario.fc_order + scenario.nc_set
    slots: dict[str, tuple[float, float]] = {}
    clock = scenario.constraints.plan_epoch
    for cat_id in order:
        offers = scenario.matrix.column(cat_id)
        if not offers:
            raise ValidationError(f"category {cat_id!r} has no offers")
        fastest = min(
            (o.estimate.optimistic + 4 * o.estimate.most_likely + o.estimate.pessimistic) / 6
            for o in offers
        )
        slots[cat_id] = (clock, clock + fastest)
        clock += fastest
    return slots


def blocked_matrix(scenario: Scenario, config: ExperimentConfig,
                   rng: random.Random) -> registry.ServiceMatrix:
    """Draw per-category blocks centered on the identity-order slots."""
    targets = config.block_categories
    if targets is None:
        targets = scenario.nc_set
    slots = identity_slots(scenario)
    matrix = scenario.matrix
    for cat_id in targets:
        if rng.random() >= config.block_prob:
            continue
        start, end = slots[cat_id]
        hole_start = max(0.0, start - config.window_pad)
        hole_end = end + config.window_pad
        for offer in matrix.column(cat_id):
            matrix = registry.block(matrix, offer.id, (hole_start, hole_end))
    return matrix


def run_trial(scenario: Scenario, config: ExperimentConfig, trial: int):
    rng = random.Random(config.seed * 1_000_003 + trial)
    matrix = blocked_matrix(scenario, config, rng)
    results = []
    for mode in config.modes:
        request = planner.PlanRequest(
            deadline=scenario.deadline,
            fc_order=scenario.fc_order,
            nc_set=scenario.nc_set,
            constraints=scenario.constraints,
            precedence_template=scenario.precedence_template,
            search_mode=mode,
        )
        started = time.perf_counter_ns()
        outcome = planner.plan(request, matrix, negotiator=planner.auto_decline)
        wall_us = (time.perf_counter_ns() - started) // 1000
        if outcome.status == "selected":
            results.append(TrialResult(
                trial, mode, True, len(outcome.orders_tried), wall_us,
                outcome.selected.probability))
        else:
            reason = "no feasible combination"
            if outcome.failure and outcome.failure.reasons:
                reason = outcome.failure.reasons[0][1]
            results.append(TrialResult(
                trial, mode, False, len(outcome.orders_tried), wall_us,
                None, absence_reason=reason))
    return results


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    rows = []
    for trial in range(config.trials):
        rows.extend(run_trial(config.scenario, config, trial))
    success_rate = {}
    mean_wall = {}
    for mode in config.modes:
        mode_rows = [r for r in rows if r.mode == mode]
        success_rate[mode] = sum(r.success for r in mode_rows) / len(mode_rows)
        mean_wall[mode] = sum(r.wall_us for r in mode_rows) / len(mode_rows)
    return ExperimentResult(tuple(rows), success_rate, mean_wall)


def to_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in result.rows:
        prob = "" if r.probability is None else f"{r.probability:.9f}"
        buf.write(f"{r.trial},{r.mode},{int(r.success)},{r.orders_tried},"
                  f"{r.wall_us},{prob}\n")
    return buf.getvalue()


def summary_lines(result: ExperimentResult) -> list[str]:
    lines = []
    for mode, rate in result.success_rate.items():
        lines.append(f"{mode}: success_rate={rate:.3f} "
                     f"mean_wall_us={result.mean_wall_us[mode]:.0f}")
    return lines
