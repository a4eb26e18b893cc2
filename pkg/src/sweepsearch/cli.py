"""Command-line front end.

Commands
--------
critical      all named critical velocities for one parameter set
plan          complete sweep schedule (summary plus optional per-cycle CSV)
simulate      run the wavefront simulation against the planned schedule
study-alpha   planner aggregates over a range of alpha = R0/r
study-deltav  planner aggregates over a range of speed increments
verify        one-shot acceptance harness over the golden values

Exit codes: 0 ok, 1 verify failure, 2 validation error, 3 infeasible plan.

Numbers print with 10 significant digits in CSV and full precision in
JSON.  Flags may also be supplied through a key=value config file
(--config); explicit flags win.  The only recognized environment
variable is SWEEPSEARCH_OUTPUT_DIR, which prefixes relative --output
paths.
"""

from __future__ import annotations

import json
import math
import os
import sys

import click
import numpy as np

from .model import (
    ConfigError,
    DomainError,
    InfeasibleError,
    SearchParams,
    plan_cycles_csv,
    plan_to_dict,
    validate,
)
from .velocity import (
    bisect_critical,
    critical_velocity_set,
    envelope_gap,
    escape_window_end,
    t_star_exact,
)
from .planner import build_plan, delta_v_threshold, end_game, sweeper_speed
from .oracle import brute_force_t_star, check_confinement, simulate


def _fmt(x) -> str:
    """CSV cell: 10 significant digits for floats, plain str otherwise."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return f"{x:.10g}"
    return str(x)


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines += [",".join(_fmt(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output is None:
        click.echo(text, nl=False)
        return
    out_dir = os.environ.get("SWEEPSEARCH_OUTPUT_DIR")
    if out_dir and not os.path.isabs(output):
        output = os.path.join(out_dir, output)
    with open(output, "w") as f:
        f.write(text)


def _load_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    values: dict[str, str] = {}
    with open(path) as f:
        for raw in f:
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise click.UsageError(f"config line is not key=value: {line!r}")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _resolve(flag_value, config: dict[str, str], key: str, default=None):
    """Explicit flag wins; then config file; then default."""
    if flag_value is not None:
        return flag_value
    if key in config:
        return float(config[key])
    return default


def _params(R0, r, VT, dV, config) -> SearchParams:
    R0 = _resolve(R0, config, "R0")
    r = _resolve(r, config, "r")
    VT = _resolve(VT, config, "VT")
    dV = _resolve(dV, config, "dV", 0.0)
    missing = [name for name, v in (("R0", R0), ("r", r), ("VT", VT)) if v is None]
    if missing:
        raise DomainError(missing[0], "required (flag or config file)")
    return validate(SearchParams(R0=R0, r=r, VT=VT, deltaV=dV))


def _range_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise DomainError("step", f"must be > 0, got {step}")
    if stop < start:
        raise DomainError("to", f"must be >= from ({start}), got {stop}")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [start + i * step for i in range(n + 1)]


def _fail_validation(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


_param_opts = [
    click.option("--R0", "R0", type=float, default=None,
                 help="initial evader-region radius"),
    click.option("--r", "r", type=float, default=None,
                 help="sensor half-length (full sensor is 2r)"),
    click.option("--VT", "VT", type=float, default=None,
                 help="maximal evader speed"),
    click.option("--dV", "dV", type=float, default=None,
                 help="sweeper speed increment above critical"),
    click.option("--config", "config_path", type=click.Path(exists=True),
                 default=None, help="key=value file supplying missing flags"),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                 default="csv", show_default=True),
    click.option("--output", "output", type=click.Path(), default=None,
                 help="write to file instead of stdout"),
]


def _with_param_opts(f):
    for opt in reversed(_param_opts):
        f = opt(f)
    return f


@click.group()
def main() -> None:
    """Sweep-plan toolkit: guaranteed-capture schedules for a line-sensor
    formation confining smart evaders in a disk."""


@main.command("critical")
@_with_param_opts
@click.option("--eps", type=float, default=1e-9, show_default=True,
              help="bisection tolerance")
def cmd_critical(R0, r, VT, dV, config_path, fmt, output, eps) -> None:
    """Print all named critical velocities plus t* and f(t*, v) each."""
    try:
        config = _load_config(config_path)
        params = _params(R0, r, VT, dV, config)
        cvs = critical_velocity_set(params, eps=eps)
    except (DomainError, ConfigError) as exc:
        _fail_validation(exc)
    names = ["v_lb", "v_one_cycle", "v_c_arc", "v_c_taylor", "v_s2",
             "v_bisection"]
    rows = []
    for name in names:
        v = getattr(cvs, name)
        gap = t_star_exact(v, params)
        rows.append({"name": name, "velocity": v, "t_star": gap.t_star,
                     "f_at_t_star": gap.f_at_t_star})
    if fmt == "json":
        doc = {"params": {"R0": params.R0, "r": params.r, "VT": params.VT,
                          "dV": params.deltaV},
               "eps": cvs.epsilon,
               "velocities": rows}
        _emit(json.dumps(doc, indent=2) + "\n", output)
    else:
        _emit(_csv(["name", "velocity", "t_star", "f_at_t_star", "eps"],
                   [[d["name"], d["velocity"], d["t_star"], d["f_at_t_star"],
                     cvs.epsilon] for d in rows]), output)


@main.command("plan")
@_with_param_opts
@click.option("--cycles", "cycles_path", type=click.Path(), default=None,
              help="also write the per-cycle table as CSV to this path")
def cmd_plan(R0, r, VT, dV, config_path, fmt, output, cycles_path) -> None:
    """Print the sweep-schedule summary: N, phase times, t_total."""
    try:
        config = _load_config(config_path)
        params = _params(R0, r, VT, dV, config)
        plan = build_plan(params)
    except InfeasibleError as exc:
        click.echo(f"error: infeasible plan: {exc}", err=True)
        click.echo(f"delta_v_threshold={exc.threshold:.10g}", err=True)
        sys.exit(3)
    except (DomainError, ConfigError) as exc:
        _fail_validation(exc)
    if cycles_path is not None:
        _emit(plan_cycles_csv(plan), cycles_path)
    if fmt == "json":
        _emit(json.dumps(plan_to_dict(plan), indent=2) + "\n", output)
    else:
        _emit(_csv(
            ["vs", "n_iterations", "t_in_total", "t_circular_total",
             "t_one", "t_total", "feasible"],
            [[plan.vs, plan.n_iterations, plan.t_in_total,
              plan.t_circular_total, plan.end_game.t_one, plan.t_total,
              plan.end_game.feasible]]), output)


@main.command("simulate")
@_with_param_opts
@click.option("--h", "h", type=float, default=None,
              help="grid resolution (default r/40)")
@click.option("--dt", "dt", type=float, default=None,
              help="time step (default h/vs)")
@click.option("--snapshots", "snapshot_path", type=click.Path(), default=None,
              help="per-refresh snapshot CSV (cell count, radius, pose)")
def cmd_simulate(R0, r, VT, dV, config_path, fmt, output, h, dt,
                 snapshot_path) -> None:
    """Run the wavefront simulation against the planned schedule."""
    try:
        config = _load_config(config_path)
        params = _params(R0, r, VT, dV, config)
        plan = build_plan(params)
        result = simulate(plan, h=h, dt=dt, snapshot_path=snapshot_path)
    except InfeasibleError as exc:
        click.echo(f"error: infeasible plan: {exc}", err=True)
        click.echo(f"delta_v_threshold={exc.threshold:.10g}", err=True)
        sys.exit(3)
    except (DomainError, ConfigError) as exc:
        _fail_validation(exc)
    doc = {
        "escaped": result.escaped,
        "escape_time": result.escape_time,
        "clean_time": result.clean_time,
        "clean_time_planned": plan.t_total,
        "max_overshoot": result.max_overshoot,
        "h": result.h,
        "dt": result.dt,
        "per_cycle_radii": list(result.per_cycle_radii),
    }
    if fmt == "json":
        _emit(json.dumps(doc, indent=2) + "\n", output)
    else:
        _emit(_csv(
            ["escaped", "escape_time", "clean_time", "clean_time_planned",
             "max_overshoot", "h", "dt"],
            [[result.escaped,
              result.escape_time if result.escape_time is not None else "",
              result.clean_time if result.clean_time is not None else "",
              plan.t_total, result.max_overshoot, result.h, result.dt]]),
            output)


_STUDY_HEADER = ["x", "N", "t_in_total", "t_circular_total", "t_total",
                 "circ_over_inward"]


def _study_row(x: float, params: SearchParams) -> list:
    plan = build_plan(params)
    ratio = (plan.t_circular_total / plan.t_in_total
             if plan.t_in_total > 0 else math.inf)
    return [x, plan.n_iterations, plan.t_in_total, plan.t_circular_total,
            plan.t_total, ratio]


def _emit_study(rows: list[list], fmt: str, output: str | None,
                x_name: str) -> None:
    header = [x_name] + _STUDY_HEADER[1:]
    if fmt == "json":
        docs = [dict(zip(header, row)) for row in rows]
        _emit(json.dumps(docs, indent=2) + "\n", output)
    else:
        _emit(_csv(header, rows), output)


@main.command("study-alpha")
@click.option("--from", "start", type=float, required=True)
@click.option("--to", "stop", type=float, required=True)
@click.option("--step", type=float, required=True)
@click.option("--r", "r", type=float, required=True)
@click.option("--VT", "VT", type=float, required=True)
@click.option("--dV", "dV", type=float, required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--output", "output", type=click.Path(), default=None)
def cmd_study_alpha(start, stop, step, r, VT, dV, fmt, output) -> None:
    """Planner aggregates over a range of alpha = R0/r (R0 = alpha*r)."""
    try:
        grid = _range_grid(start, stop, step)
        rows = []
        for a in grid:
            params = validate(SearchParams(R0=a * r, r=r, VT=VT, deltaV=dV))
            rows.append(_study_row(a, params))
    except (DomainError, ConfigError) as exc:
        _fail_validation(exc)
    except InfeasibleError as exc:
        click.echo(f"error: infeasible at a grid point: {exc}", err=True)
        sys.exit(3)
    _emit_study(rows, fmt, output, "alpha")


@main.command("study-deltav")
@click.option("--from", "start", type=float, required=True)
@click.option("--to", "stop", type=float, required=True)
@click.option("--step", type=float, required=True)
@click.option("--R0", "R0", type=float, required=True)
@click.option("--r", "r", type=float, required=True)
@click.option("--VT", "VT", type=float, required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--output", "output", type=click.Path(), default=None)
def cmd_study_deltav(start, stop, step, R0, r, VT, fmt, output) -> None:
    """Planner aggregates over a range of speed increments."""
    try:
        grid = _range_grid(start, stop, step)
        rows = []
        for dv in grid:
            params = validate(SearchParams(R0=R0, r=r, VT=VT, deltaV=dv))
            rows.append(_study_row(dv, params))
    except (DomainError, ConfigError) as exc:
        _fail_validation(exc)
    except InfeasibleError as exc:
        click.echo(f"error: infeasible at a grid point: {exc}", err=True)
        sys.exit(3)
    _emit_study(rows, fmt, output, "deltaV")


# ---------------------------------------------------------------------------
# verify: one-shot acceptance harness at the reference parameters
# (R0=100, r=10, VT=1, dV=1).
# ---------------------------------------------------------------------------

def _verify_checks(quick: bool, seed: int) -> list[dict]:
    p = SearchParams(R0=100.0, r=10.0, VT=1.0, deltaV=1.0)
    checks: list[dict] = []

    def add(name: str, passed: bool, got, want, tol) -> None:
        checks.append({"name": name, "passed": bool(passed), "got": got,
                       "want": want, "tol": tol})

    cvs = critical_velocity_set(p)
    add("v_one_cycle", abs(cvs.v_one_cycle - 62.83185307) <= 1e-7,
        cvs.v_one_cycle, 62.83185307, 1e-7)
    add("v_c_arc", abs(cvs.v_c_arc - 63.8335) <= 1e-3,
        cvs.v_c_arc, 63.8335, 1e-3)
    add("v_c_taylor", abs(cvs.v_c_taylor - 63.8319) <= 1e-3,
        cvs.v_c_taylor, 63.8319, 1e-3)
    add("v_s2", abs(cvs.v_s2 - 62.84631837) <= 1e-7,
        cvs.v_s2, 62.84631837, 1e-7)
    gap_v = cvs.v_c_taylor - cvs.v_s2
    add("v_c_taylor_minus_v_s2", abs(gap_v - 0.9855) <= 1e-3,
        gap_v, 0.9855, 1e-3)

    g = t_star_exact(cvs.v_one_cycle, p)
    add("t_star", abs(g.t_star - 0.0012) <= 1e-4, g.t_star, 0.0012, 1e-4)
    f_brute = float(envelope_gap(
        brute_force_t_star(cvs.v_one_cycle, p), cvs.v_one_cycle, p))
    add("f_at_t_star", abs(f_brute - (-1.047e-6)) <= 5e-8,
        f_brute, -1.047e-6, 5e-8)

    plan = build_plan(p)
    add("t_total", abs(plan.t_total - 349.3854) <= 1e-3,
        plan.t_total, 349.3854, 1e-3)
    eg = plan.end_game
    add("r_last", abs(eg.r_last - 1.1234) <= 1e-3, eg.r_last, 1.1234, 1e-3)
    add("t_right", abs(eg.t_right - 0.0176) <= 1e-3, eg.t_right, 0.0176, 1e-3)
    add("t_left", abs(eg.t_left - 0.0358) <= 1e-3, eg.t_left, 0.0358, 1e-3)
    add("t_one", abs(eg.t_one - 0.0533) <= 1e-3, eg.t_one, 0.0533, 1e-3)

    v_star = bisect_critical(cvs.v_one_cycle, cvs.v_c_arc, 1e-9, p)
    g_star = t_star_exact(v_star, p)
    add("bisection_gap", abs(g_star.f_at_t_star) <= 1e-9,
        g_star.f_at_t_star, 0.0, 1e-9)
    ts = np.linspace(0.0, escape_window_end(v_star, p), 100_000)
    f_min = float(np.min(envelope_gap(ts, v_star, p)))
    add("bisection_dense_nonnegative", f_min >= -1e-9, f_min, 0.0, 1e-9)

    add("confinement_at_v_c_arc", check_confinement(cvs.v_c_arc, p) >= 0.0,
        check_confinement(cvs.v_c_arc, p), ">=0", None)
    add("confinement_at_v_s2", check_confinement(cvs.v_s2, p) >= 0.0,
        check_confinement(cvs.v_s2, p), ">=0", None)
    add("escape_at_v_one_cycle", check_confinement(cvs.v_one_cycle, p) < 0.0,
        check_confinement(cvs.v_one_cycle, p), "<0", None)
    add("escape_at_v_lb", check_confinement(cvs.v_lb, p) < 0.0,
        check_confinement(cvs.v_lb, p), "<0", None)

    thr10 = delta_v_threshold(10.0, 1.0)
    thr1 = delta_v_threshold(1.0, 1.0)
    add("threshold_alpha_10", abs(thr10 - (-52.71)) <= 1e-2,
        thr10, -52.71, 1e-2)
    add("threshold_alpha_1", abs(thr1 - 3.835) <= 1e-2, thr1, 3.835, 1e-2)
    rng = np.random.default_rng(seed)
    flag_ok = True
    for _ in range(50):
        a = float(rng.uniform(1.0, 20.0))
        dv = float(rng.uniform(0.1, 10.0))
        params_i = SearchParams(R0=a * 1.0, r=1.0, VT=1.0, deltaV=dv)
        eg_i = end_game(sweeper_speed(params_i), params_i)
        flag_ok &= eg_i.feasible == (dv > delta_v_threshold(a, 1.0))
    add("threshold_sign_grid", flag_ok, flag_ok, True, None)

    if not quick:
        result = simulate(plan)
        add("simulate_no_escape", not result.escaped, result.escaped,
            False, None)
        upper = result.h + result.dt * p.VT
        radii_ok = all(
            (sim - planned) <= upper and (sim - planned) >= -result.h
            for sim, planned in zip(result.per_cycle_radii,
                                    [c.radius for c in plan.cycles]))
        add("simulate_radii_band", radii_ok, radii_ok, True, upper)
        rel = abs(result.clean_time - plan.t_total) / plan.t_total
        add("simulate_clean_time_rel", rel <= 0.02, rel, 0.0, 0.02)

    return checks


@main.command("verify")
@click.option("--quick", is_flag=True,
              help="closed-form checks only (skips the simulation)")
@click.option("--seed", type=int, default=0, show_default=True,
              help="seed for the randomized threshold grid")
@click.option("--output", "output", type=click.Path(), default=None)
def cmd_verify(quick, seed, output) -> None:
    """Run the acceptance harness; exit 1 if any check fails."""
    checks = _verify_checks(quick, seed)
    passed = all(c["passed"] for c in checks)
    report = {
        "passed": passed,
        "quick": quick,
        "seed": seed,
        "checks": checks,
    }
    _emit(json.dumps(report, indent=2) + "\n", output)
    if not passed:
        sys.exit(1)


if __name__ == "__main__":
    main()
