"""Critical sweeper velocities and the confinement margin function.

The central object is ``envelope_gap`` — the normalized gap between the
squared distance from the sensor's outer tip to the worst starting point
and the squared radius of the evader wavefront spreading from that point.
Nonnegativity of the gap over the escape window certifies that no evader
can slip around the sensor tip during a sweep cycle.

Several named velocities bracket the minimal no-escape speed:

  v_lower_bound      pi*R0*VT / r           process-independent lower bound
  v_one_cycle        2*pi*R0*VT / r         naive single-cycle speed (gap
                                            dips slightly below zero)
  v_s2               closed form that keeps the gap slightly above zero
  v_critical_taylor  v_one_cycle + VT       first-order upper bound
  v_critical_arc     (2*pi + asin(r/R0))*R0*VT / r   exact-arc upper bound

``bisect_critical`` refines the minimal no-escape speed between a known
negative-gap and a known positive-gap velocity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    SearchParams,
    validate,
    DomainError,
    NumericalError,
    BracketError,
    MaxIterError,
)

__all__ = [
    "EnvelopeGap",
    "CriticalVelocitySet",
    "escape_window_end",
    "v_lower_bound",
    "v_one_cycle",
    "envelope_gap",
    "envelope_gap_derivative",
    "t_star_exact",
    "t_star_approx",
    "v_critical_arc",
    "v_critical_taylor",
    "v_s2",
    "velocity_gap_vc_vs2",
    "bisect_critical",
    "critical_velocity_set",
]


@dataclass(frozen=True)
class EnvelopeGap:
    """Closed-form stationary point of the gap function for a fixed vs.

    t_star       candidate minimizer time (clamped to the escape window)
    f_at_t_star  gap value at t_star
    vs           sweeper speed the evaluation refers to
    k, l         scalar coefficients of the stationary-point quadratic
    quad_a/b/c   quadratic coefficients in M = (2*pi*R0/vs + t)**2
    clamped      True when the unclamped root fell outside the window
    """

    t_star: float
    f_at_t_star: float
    vs: float
    k: float
    l: float
    quad_a: float
    quad_b: float
    quad_c: float
    clamped: bool = False


@dataclass(frozen=True)
class CriticalVelocitySet:
    """The named critical velocities plus the bisection refinement."""

    v_lb: float
    v_one_cycle: float
    v_c_arc: float
    v_c_taylor: float
    v_s2: float
    v_bisection: float
    epsilon: float


def escape_window_end(vs: float, params: SearchParams) -> float:
    """End of the escape time window: a quarter turn, pi*R0 / (2*vs)."""
    return math.pi * params.R0 / (2.0 * vs)


def v_lower_bound(params: SearchParams) -> float:
    """Minimal speed for any confinement process: pi*R0*VT / r."""
    validate(params)
    return math.pi * params.R0 * params.VT / params.r


def v_one_cycle(params: SearchParams) -> float:
    """Speed matching one full cycle against the spread: 2*pi*R0*VT / r.

    Exactly twice ``v_lower_bound``; slightly too slow (the gap function
    dips marginally below zero within the escape window).
    """
    validate(params)
    return 2.0 * math.pi * params.R0 * params.VT / params.r


def envelope_gap(t, vs: float, params: SearchParams):
    """Normalized no-escape margin f(t, vs) at time t after a full cycle.

    f(t, vs) = 1 + (r^2 - VT^2*(2*pi*R0/vs + t)^2) / (2*R0*(R0 + r))
             - cos(vs*t / R0)

    Derived from the law of cosines between the sensor's outer tip at
    sweep angle vs*t/R0 and the worst starting point on the boundary;
    f >= 0 over [0, pi*R0/(2*vs)] certifies no escape.  Accepts scalar or
    ndarray ``t``.
    """
    R0, r, VT = params.R0, params.r, params.VT
    lead = 2.0 * math.pi * R0 / vs
    quad = r * r - VT * VT * (lead + t) ** 2
    return 1.0 + quad / (2.0 * R0 * (R0 + r)) - np.cos(vs * t / R0)


def envelope_gap_derivative(t, vs: float, params: SearchParams):
    """Time derivative of ``envelope_gap`` for fixed vs.

    f'(t) = -VT^2*(2*pi*R0/vs + t) / (R0*(R0 + r)) + (vs/R0)*sin(vs*t/R0)

    Negative at t = 0; its zero crossing locates the interior minimum.
    """
    R0, r, VT = params.R0, params.r, params.VT
    lead = 2.0 * math.pi * R0 / vs
    return (-VT * VT * (lead + t) / (R0 * (R0 + r))
            + (vs / R0) * np.sin(vs * t / R0))


def t_star_exact(vs: float, params: SearchParams) -> EnvelopeGap:
    """Closed-form stationary-point candidate for the gap minimum.

    Solves the small-angle reduction of f'(t) = 0 as a quadratic
    a*M^2 + b*M + c = 0 in M = (2*pi*R0/vs + t)^2 with

        k = 1 / (2*R0*(R0 + r)),   l = VT^4 / (vs^2 * (R0 + r)^2)
        a = k^2 * VT^4
        b = l - 2*k^2*r^2*VT^2 - 2*k*VT^2
        c = 2*k*r^2 + k^2*r^4

    taking the smaller root and t* = sqrt(M) - 2*pi*R0/vs, clamped to the
    escape window [0, pi*R0/(2*vs)] with ``clamped`` set when outside.
    Raises NumericalError when the discriminant is negative.
    """
    validate(params)
    if vs <= 0:
        raise DomainError("vs", f"must be > 0, got {vs}")
    R0, r, VT = params.R0, params.r, params.VT
    k = 1.0 / (2.0 * R0 * (R0 + r))
    l = VT ** 4 / (vs * vs * (R0 + r) ** 2)
    a = k * k * VT ** 4
    b = l - 2.0 * k * k * r * r * VT * VT - 2.0 * k * VT * VT
    c = 2.0 * k * r * r + k * k * r ** 4
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        raise NumericalError(
            f"negative discriminant {disc!r} for quadratic a={a!r} b={b!r} c={c!r}"
        )
    m_small = (-b - math.sqrt(disc)) / (2.0 * a)
    if m_small < 0.0:
        raise NumericalError(
            f"negative squared root argument M={m_small!r} "
            f"for quadratic a={a!r} b={b!r} c={c!r}"
        )
    t_star = math.sqrt(m_small) - 2.0 * math.pi * R0 / vs
    t_hi = escape_window_end(vs, params)
    clamped = False
    if t_star < 0.0:
        t_star, clamped = 0.0, True
    elif t_star > t_hi:
        t_star, clamped = t_hi, True
    return EnvelopeGap(
        t_star=t_star,
        f_at_t_star=float(envelope_gap(t_star, vs, params)),
        vs=vs, k=k, l=l, quad_a=a, quad_b=b, quad_c=c, clamped=clamped,
    )


def t_star_approx(vs: float, params: SearchParams) -> float:
    """First-order approximation of the gap minimizer.

    t* ~= 2*pi*R0^2*VT^2 / (vs * (vs^2*(R0 + r) - VT^2*R0))

    Requires vs^2*(R0 + r) > VT^2*R0 so the denominator is positive.
    Monotonically decreasing in vs; tends to 0 as vs grows.
    """
    validate(params)
    R0, r, VT = params.R0, params.r, params.VT
    denom = vs * vs * (R0 + r) - VT * VT * R0
    if denom <= 0.0:
        raise DomainError("vs", f"needs vs^2*(R0+r) > VT^2*R0, got vs={vs}")
    return 2.0 * math.pi * R0 * R0 * VT * VT / (vs * denom)


def v_critical_arc(params: SearchParams) -> float:
    """Exact-arc upper bound on the critical velocity.

    (2*pi + asin(r/R0)) * R0 * VT / r — a full cycle plus the arc whose
    chord equals the sensor half-length, guaranteeing a nonnegative gap
    over the whole escape window.
    """
    validate(params)
    R0, r, VT = params.R0, params.r, params.VT
    return (2.0 * math.pi + math.asin(r / R0)) * R0 * VT / r


def v_critical_taylor(params: SearchParams) -> float:
    """First-order (in r/R0) form of ``v_critical_arc``:
    2*pi*R0*VT/r + VT.  Always <= v_critical_arc; exceeds v_one_cycle by
    exactly VT.  This is the speed the sweep planner builds on.
    """
    validate(params)
    return 2.0 * math.pi * params.R0 * params.VT / params.r + params.VT


def v_s2(params: SearchParams) -> float:
    """Closed-form speed keeping the gap minimum slightly above zero.

    [pi*R0*VT*(R0+r) + VT*sqrt(R0*(R0+r)*(pi^2*R0*(R0+r) + r^2))]
        / (r*(R0+r))
    """
    validate(params)
    R0, r, VT = params.R0, params.r, params.VT
    root = math.sqrt(R0 * (R0 + r) * (math.pi ** 2 * R0 * (R0 + r) + r * r))
    return (math.pi * R0 * VT * (R0 + r) + VT * root) / (r * (R0 + r))


def velocity_gap_vc_vs2(params: SearchParams) -> float:
    """Closed form of v_critical_taylor - v_s2 (always positive).

    With s = R0 + r and root = sqrt(R0*s*(pi^2*R0*s + r^2)):

        gap = VT * ((pi*R0 + r)^2 * s^2 - root^2)
                 / (r * s * ((pi*R0 + r)*s + root))

    i.e. the difference rationalized over a common denominator, which
    avoids catastrophic cancellation for large R0/r.
    """
    validate(params)
    R0, r, VT = params.R0, params.r, params.VT
    s = R0 + r
    root = math.sqrt(R0 * s * (math.pi ** 2 * R0 * s + r * r))
    # (pi*R0 + r)^2*s^2 - root^2 simplifies to r*s*(2*pi*R0*s + r^2)
    num = (math.pi * R0 + r) ** 2 * s * s - root * root
    return VT * num / (r * s * ((math.pi * R0 + r) * s + root))


def _gap_at_candidate(vs: float, params: SearchParams, n_fallback: int = 100_000) -> float:
    """Gap value at the closed-form candidate minimizer, falling back to
    dense sampling over the escape window when the quadratic degenerates."""
    try:
        return t_star_exact(vs, params).f_at_t_star
    except NumericalError:
        ts = np.linspace(0.0, escape_window_end(vs, params), n_fallback)
        return float(np.min(envelope_gap(ts, vs, params)))


def bisect_critical(lo: float, hi: float, eps: float,
                    params: SearchParams, max_iter: int = 200) -> float:
    """Bisect on g(v) = envelope_gap(t_star_exact(v), v) for the minimal
    no-escape speed.

    Requires g(lo) < 0 < g(hi).  Returns v in [lo, hi] with
    |g(v)| <= eps and final bracket width <= eps.  Raises BracketError
    when the sign condition fails (reporting g at both endpoints) and
    MaxIterError after ``max_iter`` halvings.
    """
    validate(params)
    if eps <= 0:
        raise DomainError("eps", f"must be > 0, got {eps}")
    if not lo < hi:
        raise BracketError(f"degenerate bracket [{lo}, {hi}]")
    g_lo = _gap_at_candidate(lo, params)
    g_hi = _gap_at_candidate(hi, params)
    if not (g_lo < 0.0 < g_hi):
        raise BracketError(
            f"g must change sign over the bracket: g({lo})={g_lo!r}, "
            f"g({hi})={g_hi!r}"
        )
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        g_mid = _gap_at_candidate(mid, params)
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= eps and abs(g_mid) <= eps:
            return mid
    raise MaxIterError(
        f"no convergence to eps={eps} within {max_iter} bisection steps "
        f"(bracket [{lo}, {hi}])"
    )


def critical_velocity_set(params: SearchParams, eps: float = 1e-9) -> CriticalVelocitySet:
    """All named critical velocities plus the bisection refinement."""
    validate(params)
    lo = v_one_cycle(params)
    hi = v_critical_arc(params)
    return CriticalVelocitySet(
        v_lb=v_lower_bound(params),
        v_one_cycle=lo,
        v_c_arc=hi,
        v_c_taylor=v_critical_taylor(params),
        v_s2=v_s2(params),
        v_bisection=bisect_critical(lo, hi, eps, params),
        epsilon=eps,
    )
