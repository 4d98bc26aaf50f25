"""Deadline-aware service composition planner.

Selects one service per category from a registry under availability and
deadline constraints, evaluates candidates with PERT network analysis,
reorders the free categories when nothing fits, and maximizes the
probability of on-time completion.
"""

from .errors import CycleError, UnknownIdError, ValidationError
from .pert import (
    Activity,
    CompletionProbability,
    PertNetwork,
    ScheduleAnalysis,
    ThreePointEstimate,
    activity_variance,
    analyze,
    build_network,
    completion_probability,
    expected_time,
    normal_cdf,
)
from .planner import PlanOutcome, PlanRequest, plan
from .registry import (
    AvailabilityWindow,
    Category,
    ConstraintSet,
    ServiceMatrix,
    ServiceOffer,
    available_submatrix,
    block,
    matrix_of,
    register,
)
from .scenario import Scenario, load_scenario, parse_scenario

__all__ = [
    "Activity",
    "AvailabilityWindow",
    "Category",
    "CompletionProbability",
    "ConstraintSet",
    "CycleError",
    "PertNetwork",
    "PlanOutcome",
    "PlanRequest",
    "Scenario",
    "ScheduleAnalysis",
    "ServiceMatrix",
    "ServiceOffer",
    "ThreePointEstimate",
    "UnknownIdError",
    "ValidationError",
    "activity_variance",
    "analyze",
    "available_submatrix",
    "block",
    "build_network",
    "completion_probability",
    "expected_time",
    "load_scenario",
    "matrix_of",
    "normal_cdf",
    "parse_scenario",
    "plan",
    "register",
]
