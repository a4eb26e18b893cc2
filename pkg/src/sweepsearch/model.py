"""Problem-instance definitions, validation and shared plan/result types.

The search scenario: a line formation with a radially oriented sensor of
total length ``2r`` sweeps around a disk of radius ``R0`` that may contain
evaders moving at speed at most ``VT``.  The sweeper moves at speed
``vs = v_critical_taylor(params) + deltaV``.  All quantities are plain
floats in a consistent (but unspecified) unit system; every formula here is
scale-free in (length, time).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict


class SweepSearchError(Exception):
    """Base class for all typed errors raised by this package."""


class DomainError(SweepSearchError):
    """An input violates a precondition; ``field`` names the offender."""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


class NumericalError(SweepSearchError):
    """A numeric routine left its region of validity (e.g. negative
    discriminant); the message carries the offending coefficients."""


class BracketError(SweepSearchError):
    """Bisection endpoints do not bracket a sign change."""


class MaxIterError(SweepSearchError):
    """An iterative routine exhausted its iteration budget."""


class NoProgressError(SweepSearchError):
    """The sweeper speed is too low to advance inward at the given radius."""


class InfeasibleError(SweepSearchError):
    """The end game cannot clean the region; carries the speed-increment
    threshold that would make it feasible."""

    def __init__(self, threshold: float, message: str = ""):
        self.threshold = threshold
        super().__init__(
            message or f"end game infeasible; requires deltaV >= {threshold!r}"
        )


class ConfigError(SweepSearchError):
    """A simulation resolution/step configuration violates its adequacy
    preconditions."""


@dataclass(frozen=True)
class SearchParams:
    """One problem instance.

    R0      initial evader-region radius
    r       sensor half-length (the full line sensor has length 2r)
    VT      maximal evader speed
    deltaV  sweeper speed increment above the critical velocity (>= 0)
    """

    R0: float
    r: float
    VT: float
    deltaV: float = 0.0


def validate(params: SearchParams) -> SearchParams:
    """Return ``params`` unchanged iff all invariants hold.

    Raises DomainError naming the violated field otherwise.  Requires
    R0, r, VT > 0, deltaV >= 0 and R0 >= r (the shrinking-sweep analysis
    assumes the sensor is no longer than the initial region radius).
    """
    for name in ("R0", "r", "VT", "deltaV"):
        value = getattr(params, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise DomainError(name, f"must be a finite number, got {value!r}")
    if params.R0 <= 0:
        raise DomainError("R0", f"must be > 0, got {params.R0}")
    if params.r <= 0:
        raise DomainError("r", f"must be > 0, got {params.r}")
    if params.VT <= 0:
        raise DomainError("VT", f"must be > 0, got {params.VT}")
    if params.deltaV < 0:
        raise DomainError("deltaV", f"must be >= 0, got {params.deltaV}")
    if params.R0 < params.r:
        raise DomainError("R0", f"must be >= r ({params.r}), got {params.R0}")
    return params


def alpha(params: SearchParams) -> float:
    """Ratio R0 / r of region radius to sensor half-length."""
    validate(params)
    return params.R0 / params.r


@dataclass(frozen=True)
class CycleRecord:
    """One circular sweep cycle.

    index       cycle number i, starting at 0
    radius      bounding radius R_i at the start of the cycle
    t_sweep     time of the full circular traversal, 2*pi*R_i / vs
    delta_eff   effective inward advance achieved after the cycle
    t_in        inward-motion time following the cycle; for the last cycle
                this is the descent that puts the sensor tip at the center
    """

    index: int
    radius: float
    t_sweep: float
    delta_eff: float
    t_in: float


@dataclass(frozen=True)
class EndGameRecord:
    """Final cleaning phase once the region fits inside radius r.

    r_last            region radius after the radius-r sweep and descent
    t_last_circle     duration of the radius-r circular sweep, 2*pi*r / vs
    t_linear_descent  duration of the final descent of length r, r / vs
    t_right           rightward linear sweep time
    t_left            leftward linear sweep time
    t_one             t_right + t_left
    feasible          True iff the linear sweeps outrun the region spread
    """

    r_last: float
    t_last_circle: float
    t_linear_descent: float
    t_right: float
    t_left: float
    t_one: float
    feasible: bool


@dataclass(frozen=True)
class SweepPlan:
    """Complete cleaning schedule for one problem instance.

    vs                actual sweeper speed used (critical velocity + deltaV)
    n_iterations      number N of shrinking circular cycles
    cycles            per-cycle records, length N
    t_in_total        total inward-motion time (includes the final descent)
    t_circular_total  total circular sweep time (includes the radius-r sweep)
    end_game          final linear-phase record
    t_total           t_circular_total + t_in_total + end_game.t_one
    """

    params: SearchParams
    vs: float
    n_iterations: int
    cycles: tuple[CycleRecord, ...]
    t_in_total: float
    t_circular_total: float
    end_game: EndGameRecord
    t_total: float


# ---------------------------------------------------------------------------
# JSON serialization.  Field names match the dataclass attributes exactly.
# ---------------------------------------------------------------------------

def params_to_dict(params: SearchParams) -> dict:
    return asdict(params)


def params_from_dict(d: dict) -> SearchParams:
    return validate(SearchParams(
        R0=float(d["R0"]), r=float(d["r"]), VT=float(d["VT"]),
        deltaV=float(d.get("deltaV", 0.0)),
    ))


def plan_to_dict(plan: SweepPlan) -> dict:
    return asdict(plan)


def plan_from_dict(d: dict) -> SweepPlan:
    return SweepPlan(
        params=params_from_dict(d["params"]),
        vs=float(d["vs"]),
        n_iterations=int(d["n_iterations"]),
        cycles=tuple(CycleRecord(**c) for c in d["cycles"]),
        t_in_total=float(d["t_in_total"]),
        t_circular_total=float(d["t_circular_total"]),
        end_game=EndGameRecord(**d["end_game"]),
        t_total=float(d["t_total"]),
    )


def params_to_json(params: SearchParams) -> str:
    return json.dumps(params_to_dict(params), indent=2, sort_keys=True)


def params_from_json(text: str) -> SearchParams:
    return params_from_dict(json.loads(text))


def plan_to_json(plan: SweepPlan) -> str:
    return json.dumps(plan_to_dict(plan), indent=2, sort_keys=True)


def plan_from_json(text: str) -> SweepPlan:
    return plan_from_dict(json.loads(text))


PLAN_CSV_HEADER = "i,R_i,t_sweep,delta_eff,t_in_i"


def plan_cycles_csv(plan: SweepPlan) -> str:
    """Flat CSV of the per-cycle schedule, one row per cycle."""
    lines = [PLAN_CSV_HEADER]
    for c in plan.cycles:
        lines.append(
            f"{c.index},{c.radius:.10g},{c.t_sweep:.10g},"
            f"{c.delta_eff:.10g},{c.t_in:.10g}"
        )
    return "\n".join(lines) + "\n"
