"""Complete circular sweep schedule construction.

Each cycle i the formation (sensor footprint [R_i - r, R_i + r]) performs a
full circular traversal at speed vs, then advances inward.  The bounding
radius obeys the affine recurrence

    R_{i+1} = c3 * R_i + c1,   c1 = -r*(vs - VT)/(vs + VT),
                               c3 = 1 + 2*pi*VT/(vs + VT)

whose fixed point c1/(1 - c3) = r*(vs - VT)/(2*pi*VT) exceeds R0 for any
vs above the critical velocity, so the radii shrink geometrically toward
the fixed point until they fall below the sensor half-length r.  The end
game then cleans the remaining radius-r region with one more circular
sweep, a descent to the center, and a linear right/left pass over the
residual blob around the center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import (
    SearchParams,
    CycleRecord,
    EndGameRecord,
    SweepPlan,
    validate,
    DomainError,
    NoProgressError,
    InfeasibleError,
    NumericalError,
)
from .velocity import v_critical_taylor

__all__ = [
    "RecursionCoefficients",
    "recursion_coefficients",
    "advance_distance",
    "num_iterations",
    "radius_at",
    "aggregate_times",
    "end_game",
    "delta_v_threshold",
    "sweeper_speed",
    "build_plan",
]

_REL_TOL = 1e-6


@dataclass(frozen=True)
class RecursionCoefficients:
    """Coefficients of the radius recurrence R_{i+1} = c3*R_i + c1.

    c4 is the matching coefficient for the sweep-time recurrence
    (2*pi/vs times c1); fixed_point = c1/(1 - c3) is the radius at which
    inward progress vanishes.
    """

    c1: float
    c3: float
    c4: float
    fixed_point: float


def sweeper_speed(params: SearchParams) -> float:
    """Actual planner speed: v_critical_taylor(params) + deltaV."""
    return v_critical_taylor(params) + params.deltaV


def recursion_coefficients(vs: float, params: SearchParams) -> RecursionCoefficients:
    """Build the radius-recurrence coefficients for speed vs > VT."""
    validate(params)
    if vs <= params.VT:
        raise DomainError("vs", f"must exceed VT={params.VT}, got {vs}")
    r, VT = params.r, params.VT
    c1 = -r * (vs - VT) / (vs + VT)
    c3 = 1.0 + 2.0 * math.pi * VT / (vs + VT)
    c4 = (2.0 * math.pi / vs) * c1
    return RecursionCoefficients(
        c1=c1, c3=c3, c4=c4, fixed_point=c1 / (1.0 - c3),
    )


def advance_distance(i: int, R_i: float, vs: float,
                     params: SearchParams) -> tuple[float, float, float]:
    """Inward advance after completing cycle i at bounding radius R_i.

    Returns (delta_i, delta_eff, t_in_i):

        delta_i   = (r*(vs - VT) - 2*pi*R_i*VT) / vs
        delta_eff = delta_i * vs / (vs + VT)
        t_in_i    = delta_eff / vs

    delta_i is the raw margin left after the region spread during one
    traversal (plus the short overshoot arc); delta_eff discounts the
    spread during the inward motion itself.  Raises NoProgressError when
    delta_i < 0 (speed too low for this radius).
    """
    validate(params)
    if vs <= params.VT:
        raise DomainError("vs", f"must exceed VT={params.VT}, got {vs}")
    r, VT = params.r, params.VT
    delta_i = (r * (vs - VT) - 2.0 * math.pi * R_i * VT) / vs
    if delta_i < 0.0:
        raise NoProgressError(
            f"no inward progress at cycle {i}: delta_i={delta_i!r} < 0 "
            f"(vs={vs}, R_i={R_i})"
        )
    delta_eff = delta_i * vs / (vs + VT)
    return delta_i, delta_eff, delta_eff / vs


def num_iterations(vs: float, params: SearchParams) -> int:
    """Number N of shrinking circular cycles until the radius is <= r.

    N = ceil( ln((2*pi*r*VT - r*(vs-VT)) / (2*pi*R0*VT - r*(vs-VT)))
              / ln(1 + 2*pi*VT/(vs+VT)) )

    Requires vs strictly above v_critical_taylor so both logarithm
    arguments are positive and every cycle makes progress.
    """
    validate(params)
    R0, r, VT = params.R0, params.r, params.VT
    if vs <= v_critical_taylor(params):
        raise DomainError(
            "vs", f"must exceed the critical velocity "
            f"{v_critical_taylor(params)!r}, got {vs}"
        )
    num = 2.0 * math.pi * r * VT - r * (vs - VT)
    den = 2.0 * math.pi * R0 * VT - r * (vs - VT)
    ratio = num / den
    c3 = 1.0 + 2.0 * math.pi * VT / (vs + VT)
    n_exact = math.log(ratio) / math.log(c3)
    # absorb float rounding exactly at the ceil boundary
    n = math.ceil(n_exact - 1e-12)
    return max(n, 0)


def radius_at(i: int, vs: float, params: SearchParams) -> float:
    """Closed form of the bounding radius after i cycles:
    R_i = c3**i * (R0 - fixed_point) + fixed_point."""
    validate(params)
    coeff = recursion_coefficients(vs, params)
    return (coeff.c3 ** i) * (params.R0 - coeff.fixed_point) + coeff.fixed_point


def aggregate_times(vs: float, params: SearchParams) -> tuple[float, float]:
    """Closed-form totals (t_in_total, t_circular_total).

    t_in_total sums the N-1 inter-cycle advances plus the final descent
    R_N/vs that puts the sensor tip at the center:

        t_in_total = R0/vs + c3**(N-1) * (2*pi*R0*VT - r*(vs-VT))
                                       / (vs*(vs+VT))

    t_circular_total sums the N circular traversals plus the last
    radius-r sweep 2*pi*r/vs:

        t_circular_total = -R0*(vs+VT)/(vs*VT)
            + r*(vs-VT)*(vs+VT+2*pi*VT*N) / (2*pi*vs*VT^2)
            + c3**N * (2*pi*R0*VT - r*(vs-VT)) * (vs+VT) / (2*pi*vs*VT^2)
            + 2*pi*r/vs

    For N = 0 the sums are empty and the totals reduce to the final
    descent R0/vs and the radius-r sweep alone.
    """
    validate(params)
    R0, r, VT = params.R0, params.r, params.VT
    n = num_iterations(vs, params)
    if n == 0:
        return R0 / vs, 2.0 * math.pi * r / vs
    c3 = 1.0 + 2.0 * math.pi * VT / (vs + VT)
    head = 2.0 * math.pi * R0 * VT - r * (vs - VT)
    t_in = R0 / vs + (c3 ** (n - 1)) * head / (vs * (vs + VT))
    t_circ = (-R0 * (vs + VT) / (vs * VT)
              + r * (vs - VT) * (vs + VT + 2.0 * math.pi * VT * n)
              / (2.0 * math.pi * vs * VT * VT)
              + (c3 ** n) * head * (vs + VT)
              / (2.0 * math.pi * vs * VT * VT)
              + 2.0 * math.pi * r / vs)
    return t_in, t_circ


def end_game(vs: float, params: SearchParams) -> EndGameRecord:
    """Final cleaning phase once the region fits inside radius r.

    After the radius-r sweep (2*pi*r/vs) and a descent of r (r/vs) the
    residual region is a blob of radius R_last = r*VT*(2*pi + 1)/vs
    around the center.  The formation then sweeps linearly right past the
    spreading right edge (t_right) and back left across the whole blob
    (t_left).  Feasibility requires the sensor margin to outlast the
    spread, (r - R_last)/VT > t_one; the flag uses the conservative
    closed-form version of that condition, vs/VT > pi + 2 +
    sqrt(pi^2 + 6*pi + 7), which ``delta_v_threshold`` solves for the
    speed increment.  (The sharp bound would be pi + 3/2 +
    sqrt(pi^2 + 5*pi + 9/4); speeds between the two are reported as
    infeasible even though the margin inequality holds, erring on the
    safe side.)
    """
    validate(params)
    if vs <= params.VT:
        raise DomainError("vs", f"must exceed VT={params.VT}, got {vs}")
    r, VT = params.r, params.VT
    r_last = r * VT * (2.0 * math.pi + 1.0) / vs
    t_right = r_last / (vs - VT)
    t_left = 2.0 * vs * r_last / (vs - VT) ** 2
    t_one = t_right + t_left
    return EndGameRecord(
        r_last=r_last,
        t_last_circle=2.0 * math.pi * r / vs,
        t_linear_descent=r / vs,
        t_right=t_right,
        t_left=t_left,
        t_one=t_one,
        feasible=vs / VT > math.pi + 2.0 + math.sqrt(
            math.pi * math.pi + 6.0 * math.pi + 7.0),
    )


def delta_v_threshold(alpha: float, VT: float) -> float:
    """Speed increment above which the end game is guaranteed feasible.

    -2*pi*alpha*VT + pi*VT + VT + VT*sqrt(pi^2 + 6*pi + 7)

    Monotonically decreasing in alpha = R0/r; values <= 0 mean any
    deltaV >= 0 suffices.
    """
    if alpha < 1.0:
        raise DomainError("alpha", f"must be >= 1, got {alpha}")
    if VT <= 0.0:
        raise DomainError("VT", f"must be > 0, got {VT}")
    pi = math.pi
    return VT * (-2.0 * pi * alpha + pi + 1.0 + math.sqrt(pi * pi + 6.0 * pi + 7.0))


def build_plan(params: SearchParams) -> SweepPlan:
    """Full sweep schedule at vs = v_critical_taylor + deltaV.

    Builds per-cycle records by explicit recurrence iteration, checks the
    closed-form aggregates against the summed times, and attaches the end
    game.  Raises InfeasibleError (carrying the deltaV threshold) when the
    final linear phase cannot outrun the region spread, and DomainError
    when deltaV <= 0 (no inward progress).
    """
    validate(params)
    if params.deltaV <= 0.0:
        raise DomainError("deltaV", f"must be > 0 to make progress, got {params.deltaV}")
    vs = sweeper_speed(params)
    eg = end_game(vs, params)
    if not eg.feasible:
        threshold = delta_v_threshold(params.R0 / params.r, params.VT)
        raise InfeasibleError(
            threshold,
            f"end game infeasible at deltaV={params.deltaV}; "
            f"requires deltaV >= {threshold!r}",
        )
    n = num_iterations(vs, params)
    coeff = recursion_coefficients(vs, params)

    cycles: list[CycleRecord] = []
    radius = params.R0
    t_in_sum = 0.0
    t_circ_sum = 0.0
    for i in range(n):
        _, delta_eff, t_in_i = advance_distance(i, radius, vs, params)
        next_radius = coeff.c3 * radius + coeff.c1
        if i == n - 1:
            # last cycle: instead of a delta-sized advance, the formation
            # descends until the sensor tip reaches the center
            t_in_i = next_radius / vs
        t_sweep = 2.0 * math.pi * radius / vs
        cycles.append(CycleRecord(
            index=i, radius=radius, t_sweep=t_sweep,
            delta_eff=delta_eff, t_in=t_in_i,
        ))
        t_in_sum += t_in_i
        t_circ_sum += t_sweep
        radius = next_radius
    if n == 0:
        t_in_sum = params.R0 / vs
    t_circ_sum += eg.t_last_circle

    t_in_closed, t_circ_closed = aggregate_times(vs, params)
    for summed, closed, label in (
        (t_in_sum, t_in_closed, "t_in_total"),
        (t_circ_sum, t_circ_closed, "t_circular_total"),
    ):
        if not math.isclose(summed, closed, rel_tol=_REL_TOL):
            raise NumericalError(
                f"{label} drift: recurrence sum {summed!r} vs closed form {closed!r}"
            )

    t_total = t_circ_sum + t_in_sum + eg.t_one
    return SweepPlan(
        params=params,
        vs=vs,
        n_iterations=n,
        cycles=tuple(cycles),
        t_in_total=t_in_sum,
        t_circular_total=t_circ_sum,
        end_game=eg,
        t_total=t_total,
    )
