import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import longest_path_duration, max_path_through, normal_cdf_oracle, random_dag
from tourplan import (
    Activity,
    CycleError,
    ThreePointEstimate,
    UnknownIdError,
    ValidationError,
    activity_variance,
    analyze,
    build_network,
    completion_probability,
    expected_time,
    normal_cdf,
)


def est(o, m, p):
    return ThreePointEstimate(o, m, p)


def act(aid, o, m, p):
    return Activity(id=aid, label=aid, estimate=est(o, m, p))


class TestExpectedTime:
    def test_collapsed_triple_equals_mode(self):
        assert expected_time(est(180, 180, 180)) == 180

    def test_weighted_average(self):
        assert expected_time(est(10, 12, 20)) == pytest.approx(13.0, abs=1e-9)

    def test_weeks_example(self):
        assert expected_time(est(3, 4, 8)) == pytest.approx(4.5, abs=1e-9)

    @pytest.mark.parametrize("o,m,p,fragment", [
        (5, 4, 8, "most_likely"),
        (3, 9, 8, "pessimistic"),
        (-1, 4, 8, "optimistic"),
    ])
    def test_invalid_triples_name_the_bound(self, o, m, p, fragment):
        with pytest.raises(ValidationError, match=fragment):
            est(o, m, p)

    @given(st.floats(0, 1e6), st.floats(0, 1e6), st.floats(0, 1e6))
    def test_bounds(self, a, b, c):
        o, m, p = sorted([a, b, c])
        t = expected_time(est(o, m, p))
        assert o - 1e-9 <= t <= p + 1e-9


class TestVariance:
    def test_zero_spread(self):
        assert activity_variance(est(7, 7, 7)) == 0.0

    def test_hand_computed(self):
        assert activity_variance(est(10, 12, 20)) == pytest.approx(2.7778, abs=1e-4)
        assert activity_variance(est(3, 4, 8)) == pytest.approx(0.6944, abs=1e-4)

    def test_zero_iff_equal_endpoints(self):
        assert activity_variance(est(3, 5, 9)) > 0


class TestBuildNetwork:
    def test_chain(self):
        net = build_network(
            [act("a", 1, 1, 1), act("b", 2, 2, 2), act("c", 3, 3, 3)],
            [("a", "b"), ("b", "c")],
        )
        assert len(net.activities) == 3

    def test_cycle_reports_witness(self):
        with pytest.raises(CycleError) as excinfo:
            build_network([act("a", 1, 1, 1), act("b", 1, 1, 1)],
                          [("a", "b"), ("b", "a")])
        assert set(excinfo.value.witness) == {"a", "b"}

    def test_dangling_edge_names_id(self):
        with pytest.raises(UnknownIdError, match="zz"):
            build_network([act("a", 1, 1, 1)], [("a", "zz")])

    def test_duplicate_ids_rejected(self):
        with pytest.raises(ValidationError, match="duplicate"):
            build_network([act("a", 1, 1, 1), act("a", 2, 2, 2)])

    def test_empty_network_allowed(self):
        assert analyze(build_network([])).project_duration == 0.0

    def test_diamond(self):
        net = build_network(
            [act(i, 1, 1, 1) for i in "abcd"],
            [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        )
        assert len(net.edges) == 4


class TestAnalyze:
    def test_serial_chain(self):
        net = build_network(
            [act("a", 150, 150, 150), act("b", 20, 20, 20), act("c", 10, 10, 10)],
            [("a", "b"), ("b", "c")],
        )
        result = analyze(net)
        assert result.project_duration == 180
        assert all(f == 0 for f in result.total_float.values())
        assert result.critical_path == ("a", "b", "c")

    def test_diamond_float(self):
        net = build_network(
            [act("a", 5, 5, 5), act("b", 10, 10, 10),
             act("c", 3, 3, 3), act("d", 2, 2, 2)],
            [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
        )
        result = analyze(net)
        assert result.project_duration == 17
        assert result.critical_path == ("a", "b", "d")
        assert result.total_float["c"] == pytest.approx(7)

    def test_schedule_identities(self):
        rng = random.Random(5)
        triples, edges = random_dag(rng)
        acts = [act(i, *t) for i, t in triples.items()]
        result = analyze(build_network(acts, edges))
        for a in acts:
            assert result.earliest_finish[a.id] == pytest.approx(
                result.earliest_start[a.id] + a.expected_time, abs=1e-9)
            assert result.latest_finish[a.id] == pytest.approx(
                result.latest_start[a.id] + a.expected_time, abs=1e-9)
            assert result.total_float[a.id] >= -1e-9

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_path_enumeration(self, seed):
        rng = random.Random(seed)
        triples, edges = random_dag(rng)
        acts = [act(i, *t) for i, t in triples.items()]
        result = analyze(build_network(acts, edges))
        durations = {a.id: a.expected_time for a in acts}
        assert result.project_duration == pytest.approx(
            longest_path_duration(durations, edges), abs=1e-9)
        for aid in result.critical_path:
            assert result.total_float[aid] == pytest.approx(0, abs=1e-9)
        # Zero-float activities lie on a maximal path.
        for aid in result.critical_activities:
            assert max_path_through(durations, edges, aid) == pytest.approx(
                result.project_duration, abs=1e-6)

    def test_critical_variance_sums_path(self):
        net = build_network(
            [act("a", 10, 12, 20), act("b", 3, 4, 8)], [("a", "b")])
        result = analyze(net)
        expected = activity_variance(est(10, 12, 20)) + activity_variance(est(3, 4, 8))
        assert result.critical_variance == pytest.approx(expected, abs=1e-12)
        assert result.std_dev == pytest.approx(math.sqrt(expected), abs=1e-12)

    def test_parallel_critical_paths_pick_lexicographic(self):
        # Two identical parallel branches; both critical, path must take "a".
        net = build_network(
            [act("a", 5, 5, 5), act("b", 5, 5, 5)], [])
        result = analyze(net)
        assert result.critical_path == ("a",)
        assert result.critical_activities == ("a", "b")


class TestNormalCdf:
    def test_symmetry_point(self):
        assert normal_cdf(0.0) == 0.5

    def test_table_values(self):
        assert normal_cdf(1.96) == pytest.approx(0.9750, abs=1e-4)
        assert normal_cdf(-1.96) == pytest.approx(0.0250, abs=1e-4)

    def test_clamps_beyond_eight(self):
        assert normal_cdf(8.5) == 1.0
        assert normal_cdf(-8.5) == 0.0

    def test_rejects_non_finite(self):
        with pytest.raises(ValidationError):
            normal_cdf(float("nan"))
        with pytest.raises(ValidationError):
            normal_cdf(float("inf"))

    @pytest.mark.parametrize("z", [-6, -3.3, -0.7, 0.2, 1.5, 4.8, 6])
    def test_against_series_oracle(self, z):
        assert abs(normal_cdf(z) - normal_cdf_oracle(z)) <= 1e-7


class TestCompletionProbability:
    def chain(self, *durations):
        acts = [act(f"a{i}", d, d, d) for i, d in enumerate(durations)]
        edges = [(f"a{i}", f"a{i+1}") for i in range(len(durations) - 1)]
        return analyze(build_network(acts, edges))

    def test_degenerate_on_time(self):
        analysis = self.chain(150, 20, 10, 85, 25, 120)
        result = completion_probability(analysis, 450)
        assert analysis.project_duration == 410
        assert result.probability == 1.0
        assert result.z_value is None

    def test_degenerate_late(self):
        analysis = self.chain(150, 20, 10, 85, 25, 120)
        assert completion_probability(analysis, 400).probability == 0.0

    def test_boundary_half(self):
        net = build_network([act("a", 420, 450, 480)])
        analysis = analyze(net)
        result = completion_probability(analysis, analysis.project_duration)
        assert result.z_value == pytest.approx(0, abs=1e-12)
        assert result.probability == pytest.approx(0.5, abs=1e-12)

    def test_z_two(self):
        net = build_network([act("a", 400, 430, 460)])
        analysis = analyze(net)
        assert analysis.std_dev == pytest.approx(10, abs=1e-12)
        result = completion_probability(analysis, 450)
        assert result.z_value == pytest.approx(2.0, abs=1e-12)
        assert result.probability == pytest.approx(0.9772, abs=1e-4)

    def test_negative_deadline_rejected(self):
        with pytest.raises(ValidationError):
            completion_probability(self.chain(1), -5)


class TestScaleInvariance:
    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.001, 1000), st.integers(0, 2**31))
    def test_scaling_preserves_z_and_path(self, scale, seed):
        rng = random.Random(seed)
        triples, edges = random_dag(rng, max_activities=8)
        base = [act(i, *t) for i, t in triples.items()]
        scaled = [act(i, o * scale, m * scale, p * scale)
                  for i, (o, m, p) in triples.items()]
        r1 = analyze(build_network(base, edges))
        r2 = analyze(build_network(scaled, edges))
        deadline = r1.project_duration * 1.1 + 1
        p1 = completion_probability(r1, deadline)
        p2 = completion_probability(r2, deadline * scale)
        assert r1.critical_path == r2.critical_path
        if p1.z_value is not None:
            assert p2.z_value == pytest.approx(p1.z_value, abs=1e-9)
        assert p2.probability == pytest.approx(p1.probability, abs=1e-9)
