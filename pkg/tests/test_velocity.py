"""Critical velocities, the envelope gap function, and the bisection
refinement."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sweepsearch import (
    SearchParams,
    bisect_critical,
    critical_velocity_set,
    envelope_gap,
    envelope_gap_derivative,
    escape_window_end,
    t_star_exact,
    v_critical_arc,
    v_critical_taylor,
    v_lower_bound,
    v_one_cycle,
    v_s2,
    velocity_gap_vc_vs2,
)

PAPER = SearchParams(R0=100.0, r=10.0, VT=1.0)

valid_params = st.builds(
    SearchParams,
    R0=st.floats(15.0, 2000.0),
    r=st.floats(0.1, 10.0),
    VT=st.floats(0.1, 10.0),
)


class TestNamedVelocities:
    def test_reference_values(self):
        assert v_lower_bound(PAPER) == pytest.approx(31.41592654, abs=1e-7)
        assert v_one_cycle(PAPER) == pytest.approx(62.83185307, abs=1e-7)
        assert v_critical_arc(PAPER) == pytest.approx(63.8335, abs=1e-3)
        assert v_critical_taylor(PAPER) == pytest.approx(63.8319, abs=1e-3)
        assert v_s2(PAPER) == pytest.approx(62.84631837, abs=1e-7)
        assert velocity_gap_vc_vs2(PAPER) == pytest.approx(0.9855, abs=1e-3)

    def test_arc_velocity_at_unit_ratio(self):
        # alpha = 1 makes arcsin(r/R0) = pi/2 exactly
        p = SearchParams(R0=10.0, r=10.0, VT=1.0)
        assert v_critical_arc(p) == pytest.approx(
            (2.0 * math.pi + math.pi / 2.0) * 1.0, rel=1e-12)

    @given(valid_params)
    def test_one_cycle_is_twice_lower_bound(self, p):
        assert v_one_cycle(p) == pytest.approx(2.0 * v_lower_bound(p),
                                               rel=1e-12)

    @given(valid_params)
    def test_velocity_ordering(self, p):
        # the confinement bound sits below the one-cycle speed, which in
        # turn lies below both refined critical speeds
        assert v_lower_bound(p) < v_one_cycle(p)
        assert v_one_cycle(p) < v_critical_taylor(p)
        assert v_one_cycle(p) < v_critical_arc(p)

    @given(valid_params)
    def test_velocities_scale_linearly_with_evader_speed(self, p):
        faster = SearchParams(R0=p.R0, r=p.r, VT=2.0 * p.VT)
        assert v_one_cycle(faster) == pytest.approx(2.0 * v_one_cycle(p),
                                                    rel=1e-12)
        assert v_lower_bound(faster) == pytest.approx(2.0 * v_lower_bound(p),
                                                      rel=1e-12)


class TestEnvelopeGap:
    def test_gap_at_origin_is_tip_margin(self):
        # at t = 0 the gap reduces to the squared-distance margin between
        # the sensor tip and the wavefront, normalized
        vs = v_one_cycle(PAPER)
        f0 = float(envelope_gap(0.0, vs, PAPER))
        R0, r, VT = PAPER.R0, PAPER.r, PAPER.VT
        expect = (r ** 2 - (VT * 2.0 * math.pi * R0 / vs) ** 2) / (
            2.0 * R0 * (R0 + r))
        assert f0 == pytest.approx(expect, rel=1e-12)

    def test_derivative_matches_finite_difference(self):
        vs = 63.0
        ts = np.linspace(1e-4, escape_window_end(vs, PAPER), 50)
        eps = 1e-7
        num = (envelope_gap(ts + eps, vs, PAPER)
               - envelope_gap(ts - eps, vs, PAPER)) / (2.0 * eps)
        ana = envelope_gap_derivative(ts, vs, PAPER)
        assert np.allclose(num, ana, rtol=1e-5, atol=1e-7)

    def test_stationary_point_reference(self):
        g = t_star_exact(v_one_cycle(PAPER), PAPER)
        assert g.t_star == pytest.approx(0.0012, abs=1e-4)
        assert g.f_at_t_star < 0.0
        assert not g.clamped

    def test_stationary_value_near_the_true_minimum(self):
        # the closed-form minimizer comes from a series expansion; its
        # gap value sits within the flat valley around the true minimum
        vs = v_one_cycle(PAPER)
        g = t_star_exact(vs, PAPER)
        ts = np.linspace(0.0, escape_window_end(vs, PAPER), 200_000)
        true_min = float(np.min(envelope_gap(ts, vs, PAPER)))
        assert true_min <= g.f_at_t_star <= true_min + 5e-7

    @settings(max_examples=50, deadline=None)
    @given(st.floats(60.0, 90.0))
    def test_clamped_flag_keeps_t_star_in_window(self, vs):
        g = t_star_exact(vs, PAPER)
        assert 0.0 <= g.t_star <= escape_window_end(vs, PAPER) + 1e-15


class TestBisection:
    def test_certificate_at_reference_params(self):
        lo = v_one_cycle(PAPER)
        hi = v_critical_arc(PAPER)
        v = bisect_critical(lo, hi, 1e-9, PAPER)
        assert lo < v < hi
        g = t_star_exact(v, PAPER)
        assert abs(g.f_at_t_star) <= 1e-9

    def test_dense_sampling_confirms_nonnegative_gap(self):
        v = bisect_critical(v_one_cycle(PAPER), v_critical_arc(PAPER),
                            1e-9, PAPER)
        ts = np.linspace(0.0, escape_window_end(v, PAPER), 100_000)
        assert float(np.min(envelope_gap(ts, v, PAPER))) >= -1e-9

    @settings(max_examples=20, deadline=None)
    @given(st.floats(2.0, 100.0), st.floats(1.0, 10.0),
           st.floats(0.1, 10.0))
    def test_bisection_lands_between_brackets(self, a, r, VT):
        p = SearchParams(R0=a * r, r=r, VT=VT)
        lo = v_one_cycle(p)
        hi = v_critical_arc(p)
        v = bisect_critical(lo, hi, 1e-9, p)
        assert lo <= v <= hi


class TestCriticalVelocitySet:
    def test_collects_all_velocities(self):
        cvs = critical_velocity_set(PAPER)
        assert cvs.v_lb == pytest.approx(v_lower_bound(PAPER))
        assert cvs.v_one_cycle == pytest.approx(v_one_cycle(PAPER))
        assert cvs.v_c_arc == pytest.approx(v_critical_arc(PAPER))
        assert cvs.v_c_taylor == pytest.approx(v_critical_taylor(PAPER))
        assert cvs.v_s2 == pytest.approx(v_s2(PAPER))
        assert cvs.v_one_cycle < cvs.v_bisection < cvs.v_c_arc
        assert cvs.epsilon == 1e-9
