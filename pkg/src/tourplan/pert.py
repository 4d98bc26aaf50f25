"""PERT/CPM network analysis.

Pure functions over immutable values: three-point estimates, expected times
and variances, forward/backward schedule passes, critical path extraction,
and the normal-distribution probability of finishing by a deadline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CycleError, UnknownIdError, ValidationError

_TOL = 1e-9


@dataclass(frozen=True)
class ThreePointEstimate:
    """Optimistic / most likely / pessimistic duration triple, in minutes."""

    optimistic: float
    most_likely: float
    pessimistic: float

    def __post_init__(self):
        o, m, p = self.optimistic, self.most_likely, self.pessimistic
        for name, v in (("optimistic", o), ("most_likely", m), ("pessimistic", p)):
            if not math.isfinite(v):
                raise ValidationError(f"{name} must be finite, got {v!r}")
        if o < 0:
            raise ValidationError(f"optimistic must be >= 0, got {o}")
        if m < o:
            raise ValidationError(f"most_likely ({m}) < optimistic ({o})")
        if p < m:
            raise ValidationError(f"pessimistic ({p}) < most_likely ({m})")


def expected_time(est: ThreePointEstimate) -> float:
    """Weighted-average duration (O + 4M + P) / 6."""
    return (est.optimistic + 4.0 * est.most_likely + est.pessimistic) / 6.0


def activity_variance(est: ThreePointEstimate) -> float:
    """Duration variance ((P - O) / 6)**2."""
    spread = (est.pessimistic - est.optimistic) / 6.0
    return spread * spread


@dataclass(frozen=True)
class Activity:
    id: str
    label: str
    estimate: ThreePointEstimate
    expected_time: float = field(init=False)
    variance: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "expected_time", expected_time(self.estimate))
        object.__setattr__(self, "variance", activity_variance(self.estimate))


@dataclass(frozen=True)
class PertNetwork:
    """Activity-on-node DAG. Source/sink are implicit (zero duration)."""

    activities: tuple[Activity, ...]
    edges: tuple[tuple[str, str], ...]

    def activity(self, activity_id: str) -> Activity:
        for a in self.activities:
            if a.id == activity_id:
                return a
        raise UnknownIdError("activity", activity_id)


def build_network(activities, edges=()) -> PertNetwork:
    """Validate ids and acyclicity and return the network.

    An empty activity list is allowed (degenerate network with duration 0).
    """
    acts = tuple(activities)
    ids = [a.id for a in acts]
    seen = set()
    for i in ids:
        if i in seen:
            raise ValidationError(f"duplicate activity id: {i!r}")
        seen.add(i)
    edge_list = []
    for pred, succ in edges:
        if pred not in seen:
            raise UnknownIdError("activity", pred)
        if succ not in seen:
            raise UnknownIdError("activity", succ)
        if (pred, succ) not in edge_list:
            edge_list.append((pred, succ))
    net = PertNetwork(acts, tuple(edge_list))
    cycle = _find_cycle(seen, edge_list)
    if cycle:
        raise CycleError(cycle)
    return net


def _find_cycle(ids, edges):
    succs = {i: [] for i in ids}
    for p, s in edges:
        succs[p].append(s)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {i: WHITE for i in ids}
    stack_path = []

    def visit(node):
        color[node] = GREY
        stack_path.append(node)
        for nxt in succs[node]:
            if color[nxt] == GREY:
                return stack_path[stack_path.index(nxt):]
            if color[nxt] == WHITE:
                found = visit(nxt)
                if found:
                    return found
        stack_path.pop()
        color[node] = BLACK
        return None

    for start in sorted(ids):
        if color[start] == WHITE:
            found = visit(start)
            if found:
                return found
    return None


@dataclass(frozen=True)
class ScheduleAnalysis:
    earliest_start: dict[str, float]
    earliest_finish: dict[str, float]
    latest_start: dict[str, float]
    latest_finish: dict[str, float]
    total_float: dict[str, float]
    project_duration: float
    critical_path: tuple[str, ...]
    critical_activities: tuple[str, ...]
    critical_variance: float
    std_dev: float


def analyze(network: PertNetwork) -> ScheduleAnalysis:
    """Forward/backward pass, floats, critical path, path variance.

    The critical path reported is the lexicographically smallest (by activity
    id sequence) zero-float path; ``critical_activities`` lists every
    zero-float activity regardless of which path it sits on.
    """
    acts = {a.id: a for a in network.activities}
    if not acts:
        return ScheduleAnalysis({}, {}, {}, {}, {}, 0.0, (), (), 0.0, 0.0)

    preds = {i: [] for i in acts}
    succs = {i: [] for i in acts}
    for p, s in network.edges:
        preds[s].append(p)
        succs[p].append(s)

    order = _topological_order(acts, succs, preds)

    es, ef = {}, {}
    for i in order:
        es[i] = max((ef[p] for p in preds[i]), default=0.0)
        ef[i] = es[i] + acts[i].expected_time
    duration = max(ef.values())

    ls, lf = {}, {}
    for i in reversed(order):
        lf[i] = min((ls[s] for s in succs[i]), default=duration)
        ls[i] = lf[i] - acts[i].expected_time

    floats = {i: ls[i] - es[i] for i in acts}
    critical = tuple(sorted(i for i in acts if abs(floats[i]) <= _TOL))
    path = _smallest_critical_path(acts, succs, es, ef, floats, duration)
    cv = sum(acts[i].variance for i in path)
    return ScheduleAnalysis(
        earliest_start=es,
        earliest_finish=ef,
        latest_start=ls,
        latest_finish=lf,
        total_float=floats,
        project_duration=duration,
        critical_path=path,
        critical_activities=critical,
        critical_variance=cv,
        std_dev=math.sqrt(cv),
    )


def _topological_order(acts, succs, preds):
    indeg = {i: len(preds[i]) for i in acts}
    ready = sorted(i for i in acts if indeg[i] == 0)
    order = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        for s in sorted(succs[node]):
            indeg[s] -= 1
            if indeg[s] == 0:
                ready.append(s)
        ready.sort()
    if len(order) != len(acts):
        raise CycleError([i for i in acts if i not in order])  # pragma: no cover
    return order


def _smallest_critical_path(acts, succs, es, ef, floats, duration):
    """Lexicographically smallest source-to-sink path of zero-float activities.

    Consecutive path activities must be back-to-back in time (EF(a) == ES(b))
    so that parallel critical branches are not mixed into one path.
    """
    def is_crit(i):
        return abs(floats[i]) <= _TOL

    def extend(node):
        # Returns the lexicographically smallest critical continuation, or
        # None if this branch cannot reach the project finish.
        if abs(ef[node] - duration) <= _TOL and not any(
            is_crit(s) and abs(es[s] - ef[node]) <= _TOL for s in succs[node]
        ):
            return (node,)
        for s in sorted(succs[node]):
            if is_crit(s) and abs(es[s] - ef[node]) <= _TOL:
                tail = extend(s)
                if tail is not None:
                    return (node,) + tail
        if abs(ef[node] - duration) <= _TOL:
            return (node,)
        return None

    for start in sorted(acts):
        if is_crit(start) and abs(es[start]) <= _TOL:
            path = extend(start)
            if path is not None:
                return path
    return ()


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function.

    Absolute error well under 1e-7; |z| > 8 clamps to exactly 0 or 1.
    """
    if not math.isfinite(z):
        raise ValidationError(f"z must be finite, got {z!r}")
    if z > 8.0:
        return 1.0
    if z < -8.0:
        return 0.0
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


@dataclass(frozen=True)
class CompletionProbability:
    deadline: float
    z_value: float | None  # None when std_dev == 0 (step rule applies)
    probability: float


def completion_probability(analysis: ScheduleAnalysis, deadline: float) -> CompletionProbability:
    """Probability of finishing by ``deadline``.

    With zero path variance the distribution degenerates to a point, so the
    probability is the step function at the deadline and z is undefined.
    """
    if deadline < 0:
        raise ValidationError(f"deadline must be >= 0, got {deadline}")
    if analysis.std_dev > 0.0:
        z = (deadline - analysis.project_duration) / analysis.std_dev
        return CompletionProbability(deadline, z, normal_cdf(z))
    prob = 1.0 if analysis.project_duration <= deadline else 0.0
    return CompletionProbability(deadline, None, prob)
