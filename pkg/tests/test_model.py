"""Parameter validation and serialization round-trips."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sweepsearch import (
    DomainError,
    SearchParams,
    alpha,
    build_plan,
    params_from_json,
    params_to_json,
    plan_from_json,
    plan_to_json,
    validate,
)

PAPER = SearchParams(R0=100.0, r=10.0, VT=1.0, deltaV=1.0)


class TestValidate:
    def test_accepts_valid_params(self):
        assert validate(PAPER) is PAPER

    @pytest.mark.parametrize("field,bad", [
        ("R0", -5.0), ("R0", 0.0), ("r", 0.0), ("r", -1.0),
        ("VT", 0.0), ("VT", -2.0), ("deltaV", -0.1),
        ("R0", float("nan")), ("VT", float("inf")),
    ])
    def test_rejects_bad_field_naming_it(self, field, bad):
        kwargs = {"R0": 100.0, "r": 10.0, "VT": 1.0, "deltaV": 1.0}
        kwargs[field] = bad
        with pytest.raises(DomainError) as exc:
            validate(SearchParams(**kwargs))
        assert field in str(exc.value)

    def test_rejects_sensor_longer_than_region(self):
        with pytest.raises(DomainError) as exc:
            validate(SearchParams(R0=5.0, r=10.0, VT=1.0))
        assert "R0" in str(exc.value)

    def test_alpha_is_radius_ratio(self):
        assert alpha(PAPER) == pytest.approx(10.0)


valid_params = st.builds(
    SearchParams,
    R0=st.floats(15.0, 2000.0),
    r=st.floats(0.1, 10.0),
    VT=st.floats(0.1, 10.0),
    deltaV=st.floats(0.1, 100.0),
)


class TestSerialization:
    @given(valid_params)
    def test_params_json_round_trip(self, params):
        assert params_from_json(params_to_json(params)) == params

    def test_plan_json_round_trip(self):
        plan = build_plan(PAPER)
        back = plan_from_json(plan_to_json(plan))
        assert back.params == plan.params
        assert back.n_iterations == plan.n_iterations
        assert back.t_total == plan.t_total
        assert back.cycles == plan.cycles
        assert back.end_game == plan.end_game

    @settings(max_examples=25, deadline=None)
    @given(st.floats(2.0, 50.0), st.floats(1.0, 5.0))
    def test_plan_round_trip_is_lossless(self, a, dv):
        params = SearchParams(R0=a * 10.0, r=10.0, VT=1.0, deltaV=dv)
        plan = build_plan(params)
        assert plan_from_json(plan_to_json(plan)) == plan

    def test_t_total_is_sum_of_phases(self):
        plan = build_plan(PAPER)
        assert plan.t_total == pytest.approx(
            plan.t_circular_total + plan.t_in_total + plan.end_game.t_one,
            rel=1e-12)
        assert not math.isnan(plan.t_total)
