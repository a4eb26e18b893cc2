"""Discrete-time wavefront simulation oracle.

Independent cross-check of the closed-form planner: the evader region is
an occupancy field on a Cartesian grid that spreads at speed VT from every
occupied cell, while the line sensor (rasterized as annular sectors or
rectangles swept per time step) removes cells it passes over.  The field
certifies no-escape, per-cycle bounding radii and total cleaning time.

Region representation: instead of dilating a boolean set every step, the
field keeps a float threshold ``W`` per cell — the cumulative spread
distance at which the cell becomes occupied.  With ``D = VT * t`` the
occupied set is ``W <= D``.  Growth is then exact (Euclidean distance
transform refreshes satisfy dist(x, S grown by g) = max(dist(x, S) - g, 0)
identically), cleaning sets ``W = +inf`` on swept cells, and periodic
refreshes rebuild thresholds from the current occupied set so cleaned
cells recontaminate from their surroundings.  Refreshes run every h/2 of
spread, so occupancy between refreshes lags truth by at most half a cell
and never overshoots it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SearchParams, SweepPlan, validate, ConfigError
from .velocity import envelope_gap, escape_window_end

try:  # pragma: no cover - exercised implicitly by whichever env runs tests
    import cv2

    def _edt(free: np.ndarray) -> np.ndarray:
        """Euclidean distance (in cells) from each free cell to the
        nearest occupied cell; ``free`` is True where unoccupied."""
        return cv2.distanceTransform(
            free.astype(np.uint8), cv2.DIST_L2, cv2.DIST_MASK_PRECISE
        )
except ImportError:  # pragma: no cover
    from scipy import ndimage

    def _edt(free: np.ndarray) -> np.ndarray:
        return ndimage.distance_transform_edt(free).astype(np.float32)

__all__ = [
    "OccupancyGrid",
    "SensorPose",
    "SimulationResult",
    "WavefrontField",
    "check_confinement",
    "brute_force_t_star",
    "simulate",
    "evader_escape_times",
]


@dataclass(frozen=True)
class OccupancyGrid:
    """Boolean occupancy snapshot.

    resolution  cell edge length h
    extent      half-width of the square domain (>= R0 + 2r)
    cells       2D bool array; True = possible evader location
    """

    resolution: float
    extent: float
    cells: np.ndarray


@dataclass(frozen=True)
class SensorPose:
    """Sensor position at one instant.

    In circular mode the sensor is the radial segment
    [inner_radius, outer_radius] at ``angle``, with the midpoint riding
    the current bounding circle (footprint r inside, r outside).
    """

    angle: float
    inner_radius: float
    outer_radius: float
    mode: str  # circular | descending | linear-right | linear-left


@dataclass(frozen=True)
class SimulationResult:
    escaped: bool
    escape_time: float | None
    per_cycle_radii: tuple[float, ...]
    clean_time: float | None
    max_overshoot: float
    h: float
    dt: float


def check_confinement(vs: float, params: SearchParams,
                      n_samples: int = 100_000) -> float:
    """Worst-case squared-distance margin at the worst boundary point.

    Samples t over the escape window [0, pi*R0/(2*vs)] and returns the
    minimum of chi^2(theta(t)) - VT^2*(2*pi*R0/vs + t)^2, where chi is
    the distance from the sensor's outer tip to the worst starting point.
    A nonnegative return certifies that the spreading wavefront never
    reaches the tip gap, i.e. no escape during a sweep cycle.
    """
    validate(params)
    if n_samples < 1000:
        raise ConfigError(f"n_samples must be >= 1000, got {n_samples}")
    R0, r, VT = params.R0, params.r, params.VT
    ts = np.linspace(0.0, escape_window_end(vs, params), n_samples)
    theta = vs * ts / R0
    chi2 = (R0 + r) ** 2 + R0 ** 2 - 2.0 * R0 * (R0 + r) * np.cos(theta)
    front2 = (VT * (2.0 * math.pi * R0 / vs + ts)) ** 2
    return float(np.min(chi2 - front2))


def brute_force_t_star(vs: float, params: SearchParams,
                       n_samples: int = 100_000) -> float:
    """Grid argmin of ``envelope_gap`` over the escape window, refined by
    golden-section search to a 1e-9 window width."""
    validate(params)
    if n_samples < 100_000:
        raise ConfigError(f"n_samples must be >= 1e5, got {n_samples}")
    hi = escape_window_end(vs, params)
    ts = np.linspace(0.0, hi, n_samples)
    vals = envelope_gap(ts, vs, params)
    i = int(np.argmin(vals))
    a = ts[max(i - 1, 0)]
    b = ts[min(i + 1, n_samples - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = float(envelope_gap(c, vs, params))
    fd = float(envelope_gap(d, vs, params))
    while b - a > 1e-9:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = float(envelope_gap(c, vs, params))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = float(envelope_gap(d, vs, params))
    return 0.5 * (a + b)


class WavefrontField:
    """Threshold-field representation of the spreading evader region."""

    def __init__(self, params: SearchParams, h: float,
                 margin: float | None = None):
        validate(params)
        self.params = params
        self.h = h
        self.extent = params.R0 + 2.0 * params.r
        n = int(math.ceil(self.extent / h))
        coords = np.arange(-n, n + 1, dtype=np.float32) * np.float32(h)
        self.x = coords
        self.y = coords
        X = coords[None, :]
        Y = coords[:, None]
        self.rho = np.sqrt(X * X + Y * Y)
        self.theta = np.mod(np.arctan2(Y, X), 2.0 * math.pi).astype(np.float32)
        # eighth-cell outward inflation of the initial disk; together with
        # the half-cell arrival symmetrization in refresh() this keeps the
        # discretized front within half a cell of the true front
        seed = params.R0 + h / 8.0
        self.W = np.maximum(self.rho - np.float32(seed), 0.0).astype(np.float32)
        self.D = 0.0           # cumulative spread distance VT * t
        self._d_refresh = 0.0  # D at the last threshold refresh
        # radial cleaning margin: cells within this distance of the
        # footprint's radial edges are left uncleared (inward rounding)
        self.margin = h / 4.0 if margin is None else margin

    # -- queries ------------------------------------------------------------

    def occupancy(self) -> np.ndarray:
        return self.W <= self.D

    def grid(self) -> OccupancyGrid:
        return OccupancyGrid(resolution=self.h, extent=self.extent,
                             cells=self.occupancy())

    def occupied_any(self) -> bool:
        return bool(np.any(self.W <= self.D))

    def bounding_radius(self) -> float:
        occ = self.occupancy()
        if not occ.any():
            return 0.0
        return float(self.rho[occ].max())

    # -- dynamics -----------------------------------------------------------

    def advance(self, dt_time: float) -> None:
        """Let the region spread for ``dt_time``; refreshes thresholds
        whenever accumulated spread since the last refresh reaches h.
        Each refresh re-quantizes the front onto cell centers, costing a
        small fraction of a cell of propagation, so refreshes are spaced
        as far apart as the escape-detection budget allows."""
        self.D += self.params.VT * dt_time
        if self.D - self._d_refresh >= self.h - 1e-12:
            self.refresh()

    def refresh(self) -> None:
        """Rebuild thresholds from the current occupied set, so cleaned
        cells recontaminate from their surroundings at speed VT and
        cells whose original source was swept away stop inheriting the
        initial-disk thresholds."""
        occ = self.W <= self.D
        if not occ.any():
            self.W.fill(np.inf)
            self._d_refresh = self.D
            return
        dist = _edt(~occ) * np.float32(self.h)
        np.minimum(self.W, np.float32(self.D) + dist, out=self.W)
        self._d_refresh = self.D

    # -- cleaning -----------------------------------------------------------

    def _bbox(self, pts: np.ndarray) -> tuple[slice, slice]:
        pad = 2.0 * self.h
        x0, y0 = pts.min(axis=0) - pad
        x1, y1 = pts.max(axis=0) + pad
        n = len(self.x)
        ix0 = max(int((x0 + self.extent) / self.h), 0)
        ix1 = min(int((x1 + self.extent) / self.h) + 2, n)
        iy0 = max(int((y0 + self.extent) / self.h), 0)
        iy1 = min(int((y1 + self.extent) / self.h) + 2, n)
        return slice(iy0, iy1), slice(ix0, ix1)

    def clean_annular_sector(self, center_radius: float, start_angle: float,
                             ang_from: float, ang_to: float) -> None:
        """Clear cells radially inside the footprint whose sweep-local
        angle (measured from start_angle) lies in (ang_from, ang_to]."""
        r = self.params.r
        lo = max(center_radius - r + self.margin, 0.0)
        hi = center_radius + r - self.margin
        if hi <= lo or ang_to <= ang_from:
            return
        a0 = start_angle + ang_from
        a1 = start_angle + ang_to
        top = hi + 6.0 * self.h
        angs = np.linspace(a0, a1, max(3, int((a1 - a0) / 0.5) + 2))
        corners = np.concatenate([
            np.stack([lo * np.cos(angs), lo * np.sin(angs)], axis=1),
            np.stack([top * np.cos(angs), top * np.sin(angs)], axis=1),
        ])
        sy, sx = self._bbox(corners)
        rho = self.rho[sy, sx]
        local = np.mod(self.theta[sy, sx] - np.float32(start_angle % (2.0 * math.pi)),
                       2.0 * math.pi)
        in_wedge = (local >= ang_from) & (local <= ang_to)
        w = self.W[sy, sx]
        band = (rho >= lo) & (rho <= hi) & in_wedge
        # Swept cells restart on the exact continuum regrowth schedule of
        # the uncleaned disk below the footprint: the distance from a point
        # at radius rho to the disk {rho' <= lo} is exactly rho - lo, so
        # the arrival threshold needs no grid approximation.  This also
        # overwrites any pending spurious through-sensor arrivals here.
        w[band] = np.float32(self.D) + (rho[band] - np.float32(lo))
        # thresholds just above the footprint that have not fired yet refer
        # to sources this pass swept away; drop them so only surviving
        # sources re-imprint arrivals at the next refresh
        purge = (rho > hi) & (rho <= top) & in_wedge & (w > self.D)
        w[purge] = np.inf

    def clean_rect(self, axis_angle: float, s_from: float, s_to: float) -> None:
        """Clear the rectangle swept by the sensor segment of half-length
        r oriented along ``axis_angle`` while its center moved from
        offset s_from to s_to along the perpendicular direction."""
        r = self.params.r
        u = np.array([math.cos(axis_angle), math.sin(axis_angle)])
        p = np.array([-math.sin(axis_angle), math.cos(axis_angle)])
        s0, s1 = min(s_from, s_to), max(s_from, s_to)
        half = r - self.margin
        top = self.extent * 1.5
        corners = np.array([
            s0 * p + top * u, s0 * p - top * u,
            s1 * p + top * u, s1 * p - top * u,
        ])
        sy, sx = self._bbox(corners)
        X = self.x[sx][None, :]
        Y = self.y[sy][:, None]
        pu = X * u[0] + Y * u[1]
        pp = X * p[0] + Y * p[1]
        in_strip = (pp >= s0) & (pp <= s1)
        mask = (np.abs(pu) <= half) & in_strip
        # drop unfired thresholds beyond the segment ends (same purge as
        # the annular cleaner): swept sources must not leave stale arrivals
        mask |= (np.abs(pu) > half) & in_strip & (self.W[sy, sx] > self.D)
        self.W[sy, sx][mask] = np.inf


def _phase_steps(duration: float, dt: float) -> tuple[int, float]:
    n = max(1, int(math.ceil(duration / dt - 1e-12)))
    return n, duration / n


def simulate(plan: SweepPlan, h: float | None = None, dt: float | None = None,
             snapshot_path: str | None = None) -> SimulationResult:
    """Run the full pose timeline of ``plan`` against the wavefront field.

    Timeline: for each cycle a full circular traversal at the cycle
    radius followed by the inward motion; then the radius-r sweep, the
    descent of r to the center, and the linear right/left passes.  The
    linear phase is extended (up to a bounded number of extra passes)
    until the field is clean, so ``clean_time`` reports the actual
    simulated cleaning time.

    Preconditions: dt*vs <= h, dt*VT <= h/2 and h <= r/20.
    Defaults: h = r/40, dt = h/vs (one cell of sensor travel per step).
    """
    p = plan.params
    vs = plan.vs
    if h is None:
        h = p.r / 40.0
    if dt is None:
        dt = h / vs
    if h > p.r / 20.0 + 1e-12:
        raise ConfigError(f"h={h} too coarse; need h <= r/20 = {p.r / 20.0}")
    if dt * vs > h + 1e-12:
        raise ConfigError(f"dt={dt} too large; need dt*vs <= h")
    if dt * p.VT > 0.5 * h + 1e-12:
        raise ConfigError(f"dt={dt} too large; need dt*VT <= h/2")

    # The grid wavefront lags the true front by up to one cell, while the
    # planner's recurrence already absorbs r*VT/vs of regrowth into the
    # next cycle radius; lifting the cleaning margin by that amount keeps
    # the measured cycle radii within one cell of the planned ones.
    field = WavefrontField(p, h, margin=p.r * p.VT / vs + h / 8.0)
    escape_rho = p.R0 + p.r
    # escape is detected on a thin ring just outside the confinement
    # radius: contamination growing outward must occupy it while crossing,
    # and every artifact source beyond it is purged before it can fire
    ring = np.where((field.rho > escape_rho) &
                    (field.rho <= escape_rho + 4.0 * h))
    snapshots: list[str] = []

    t = 0.0
    escaped = False
    escape_time: float | None = None
    clean_time: float | None = None
    per_cycle_radii: list[float] = []
    max_overshoot = 0.0

    def snapshot(pose: SensorPose) -> None:
        if snapshot_path is None:
            return
        occ = field.occupancy()
        n_occ = int(np.count_nonzero(occ))
        rad = float(field.rho[occ].max()) if n_occ else 0.0
        snapshots.append(
            f"{t:.10g},{pose.mode},{pose.angle:.10g},{pose.inner_radius:.10g},"
            f"{pose.outer_radius:.10g},{n_occ},{rad:.10g}"
        )

    def escaped_now() -> bool:
        return bool(np.any(field.W[ring] <= field.D))

    def run_circular(center: float, duration: float, start_angle: float):
        """Sweep a full circle (or arc) of angle duration*vs/center,
        cleaning progressively each step.

        Threshold refreshes use Euclidean distances, which pass straight
        through the sensor segment, so every refresh imprints spurious
        arrival thresholds behind the frontier.  The sensor is treated as
        an impermeable barrier: after refreshes, every cell behind the
        frontier lying above the legitimate regrowth cone (contamination
        rising at speed VT from the footprint's inner edge since the
        sweep passed that angle) is reset.  Returns the end angle and the
        eraser closure, reused while the formation descends in place."""
        nonlocal t, escaped, escape_time
        n_steps, sdt = _phase_steps(duration, dt)
        total_ang = duration * vs / center
        t_start = t
        lo = max(center - p.r + field.margin, 0.0)
        two_pi = 2.0 * math.pi
        local = np.mod(field.theta - np.float32(start_angle % two_pi), two_pi)
        # Exact regrowth schedule behind the frontier: the sweep passes
        # angle a at t_start + a*center/vs, after which contamination can
        # only come from the uncleaned disk below the footprint, arriving
        # at radius rho no earlier than pass time + (rho - lo)/VT.  Spread
        # distances below this schedule are through-sensor artifacts.
        schedule = (field.rho - np.float32(lo)
                    + local * np.float32(p.VT * center / vs)
                    + np.float32(p.VT * t_start))
        local_ring = local[ring]
        schedule_ring = schedule[ring]
        state = {"now": 0.0, "erased_d": 0.0}

        def erase_artifacts() -> None:
            np.maximum(field.W, schedule, out=field.W,
                       where=local <= state["now"])
            state["erased_d"] = field.D

        def erase_ring_artifacts() -> None:
            w = field.W[ring]
            field.W[ring] = np.where(local_ring <= state["now"],
                                     np.maximum(w, schedule_ring), w)

        cleaned_to = 0.0
        for k in range(1, n_steps + 1):
            if escaped:
                return start_angle, erase_artifacts
            ang_now = total_ang * k / n_steps
            field.clean_annular_sector(center, start_angle, cleaned_to, ang_now)
            cleaned_to = ang_now
            state["now"] = ang_now
            t += sdt
            field.advance(sdt)
            if field.D == field._d_refresh:  # a refresh just ran
                erase_ring_artifacts()
                if field.D - state["erased_d"] >= 4.0 * h - 1e-12:
                    erase_artifacts()
                if escaped_now():
                    escaped = True
                    escape_time = t
                snapshot(SensorPose(start_angle + ang_now, center - p.r,
                                    center + p.r, "circular"))
        erase_artifacts()
        return start_angle + total_ang, erase_artifacts

    def run_descent(duration: float, angle: float, c_from: float, c_to: float,
                    erase_artifacts=None) -> None:
        nonlocal t, escaped, escape_time
        if duration <= 0.0:
            return
        n_steps, sdt = _phase_steps(duration, dt)
        for k in range(1, n_steps + 1):
            if escaped:
                return
            t += sdt
            field.advance(sdt)
            if field.D == field._d_refresh:
                if erase_artifacts is not None:
                    erase_artifacts()
                if escaped_now():
                    escaped = True
                    escape_time = t
                c = c_from + (c_to - c_from) * k / n_steps
                snapshot(SensorPose(angle, c - p.r, c + p.r, "descending"))

    def run_linear(axis_angle: float, s_from: float, s_to: float,
                   mode: str) -> bool:
        """Linear pass; returns True when the field became clean."""
        nonlocal t, clean_time
        duration = abs(s_to - s_from) / vs
        if duration <= 0.0:
            return not field.occupied_any()
        n_steps, sdt = _phase_steps(duration, dt)
        s_prev = s_from
        for k in range(1, n_steps + 1):
            s_now = s_from + (s_to - s_from) * k / n_steps
            field.clean_rect(axis_angle, s_prev, s_now)
            s_prev = s_now
            t += sdt
            field.advance(sdt)
            if not field.occupied_any():
                clean_time = t
                return True
            if field.D == field._d_refresh:
                snapshot(SensorPose(axis_angle, -p.r, p.r, mode))
        return False

    # --- cycle phases -------------------------------------------------------
    field.refresh()
    angle = 0.0
    tail_erase = None
    radii = [c.radius for c in plan.cycles]
    for i, cyc in enumerate(plan.cycles):
        field.refresh()
        if tail_erase is not None:
            tail_erase()
        sim_radius = field.bounding_radius()
        per_cycle_radii.append(sim_radius)
        max_overshoot = max(max_overshoot, sim_radius - cyc.radius)
        if escaped:
            break
        angle, tail_erase = run_circular(cyc.radius, cyc.t_sweep, angle)
        if i < len(radii) - 1:
            run_descent(cyc.t_in, angle, cyc.radius, radii[i + 1], tail_erase)
        else:
            # descend until the sensor tip reaches the center
            run_descent((cyc.radius - p.r) / vs, angle, cyc.radius, p.r,
                        tail_erase)

    # --- end game -----------------------------------------------------------
    if not escaped:
        if not plan.cycles:
            run_descent(max(p.R0 - p.r, 0.0) / vs, angle, p.R0, p.r)
        angle, tail_erase = run_circular(p.r, plan.end_game.t_last_circle, angle)
    if not escaped:
        run_descent(plan.end_game.t_linear_descent, angle, p.r, 0.0, tail_erase)
    if not escaped:
        eg = plan.end_game
        reach = vs * eg.t_right
        clean = run_linear(angle, 0.0, reach, "linear-right")
        if not clean:
            clean = run_linear(angle, reach, reach - vs * eg.t_left, "linear-left")
        # bounded extension: keep alternating until clean
        s = reach - vs * eg.t_left
        span = 2.0 * (eg.r_last + p.r)
        direction = 1.0
        for _ in range(4):
            if clean:
                break
            clean = run_linear(angle, s, s + direction * span,
                               "linear-right" if direction > 0 else "linear-left")
            s += direction * span
            direction = -direction

    if snapshot_path is not None:
        header = "t,mode,angle,inner_radius,outer_radius,occupied_cells,bounding_radius"
        with open(snapshot_path, "w") as fh:
            fh.write(header + "\n")
            fh.write("\n".join(snapshots) + "\n")

    return SimulationResult(
        escaped=escaped,
        escape_time=escape_time,
        per_cycle_radii=tuple(per_cycle_radii),
        clean_time=clean_time,
        max_overshoot=max_overshoot,
        h=h,
        dt=dt,
    )


def evader_escape_times(vs: float, params: SearchParams,
                        starts: np.ndarray, directions: np.ndarray,
                        t_max: float, dt: float = 1e-3) -> np.ndarray:
    """Escape times of straight-line point evaders against the first
    circular sweep cycle.

    The sensor is the radial segment [R0 - r, R0 + r] starting at angle 0
    and sweeping counterclockwise at angular rate vs/R0.  An evader moving
    at speed VT from ``starts[i]`` along unit vector ``directions[i]``
    escapes when its distance from the center exceeds R0 + r; it is caught
    (escape time inf) when the sensor passes over it first.
    """
    validate(params)
    R0, r, VT = params.R0, params.r, params.VT
    n = len(starts)
    pos = np.array(starts, dtype=float).copy()
    vel = np.array(directions, dtype=float) * VT
    times = np.full(n, np.inf)
    alive = np.ones(n, dtype=bool)  # neither caught nor escaped yet
    omega = vs / R0
    steps = int(math.ceil(t_max / dt))
    for k in range(1, steps + 1):
        if not alive.any():
            break
        t = k * dt
        pos[alive] += vel[alive] * dt
        rho = np.hypot(pos[:, 0], pos[:, 1])
        ang = np.mod(np.arctan2(pos[:, 1], pos[:, 0]), 2.0 * math.pi)
        sweep_prev = omega * (t - dt)
        sweep_now = omega * t
        # caught: the sensor's angular interval passed the evader while it
        # was radially within the footprint
        if sweep_now <= 2.0 * math.pi:
            in_foot = (rho >= R0 - r) & (rho <= R0 + r)
            passed = (ang >= sweep_prev) & (ang < sweep_now)
            caught = alive & in_foot & passed
            alive[caught] = False
        esc = alive & (rho > R0 + r)
        times[esc] = t
        alive[esc] = False
    return times
