"""Sweep planning for line-sensor search of smart evaders in a disk.

Computes the critical sweeper velocities that guarantee confinement of a
spreading evader region, builds complete shrinking-sweep cleaning
schedules, and cross-checks them against an independent discrete-time
wavefront simulation.
"""

from .model import (
    BracketError,
    ConfigError,
    CycleRecord,
    DomainError,
    EndGameRecord,
    InfeasibleError,
    MaxIterError,
    NoProgressError,
    NumericalError,
    SearchParams,
    SweepPlan,
    SweepSearchError,
    alpha,
    plan_cycles_csv,
    plan_from_dict,
    plan_from_json,
    plan_to_dict,
    plan_to_json,
    params_from_dict,
    params_from_json,
    params_to_dict,
    params_to_json,
    validate,
)
from .velocity import (
    CriticalVelocitySet,
    EnvelopeGap,
    bisect_critical,
    critical_velocity_set,
    envelope_gap,
    envelope_gap_derivative,
    escape_window_end,
    t_star_approx,
    t_star_exact,
    v_critical_arc,
    v_critical_taylor,
    v_lower_bound,
    v_one_cycle,
    v_s2,
    velocity_gap_vc_vs2,
)
from .planner import (
    RecursionCoefficients,
    advance_distance,
    aggregate_times,
    build_plan,
    delta_v_threshold,
    end_game,
    num_iterations,
    radius_at,
    recursion_coefficients,
    sweeper_speed,
)
from .oracle import (
    SimulationResult,
    WavefrontField,
    brute_force_t_star,
    check_confinement,
    evader_escape_times,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "BracketError",
    "ConfigError",
    "CriticalVelocitySet",
    "CycleRecord",
    "DomainError",
    "EndGameRecord",
    "EnvelopeGap",
    "InfeasibleError",
    "MaxIterError",
    "NoProgressError",
    "NumericalError",
    "RecursionCoefficients",
    "SearchParams",
    "SimulationResult",
    "SweepPlan",
    "SweepSearchError",
    "WavefrontField",
    "advance_distance",
    "aggregate_times",
    "alpha",
    "bisect_critical",
    "brute_force_t_star",
    "build_plan",
    "check_confinement",
    "critical_velocity_set",
    "delta_v_threshold",
    "end_game",
    "envelope_gap",
    "envelope_gap_derivative",
    "escape_window_end",
    "evader_escape_times",
    "num_iterations",
    "plan_cycles_csv",
    "plan_from_dict",
    "plan_from_json",
    "plan_to_dict",
    "plan_to_json",
    "params_from_dict",
    "params_from_json",
    "params_to_dict",
    "params_to_json",
    "radius_at",
    "recursion_coefficients",
    "simulate",
    "sweeper_speed",
    "t_star_approx",
    "t_star_exact",
    "v_critical_arc",
    "v_critical_taylor",
    "v_lower_bound",
    "v_one_cycle",
    "v_s2",
    "validate",
    "velocity_gap_vc_vs2",
]
