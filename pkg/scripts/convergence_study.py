#!/usr/bin/env python3
"""Grid-refinement study for the wavefront simulation.

Runs the simulation for one instance across a sequence of halved grid
resolutions and reports, per level: whether the region stayed confined,
the maximum overshoot beyond the planned cycle radii, the simulated
cleaning time, and its relative error against the planned total.

Usage: python3 scripts/convergence_study.py [R0 r VT dV] [levels]
Defaults: a small instance (R0=20, r=4, VT=1, dV=1) at 3 levels.
"""

import sys
import time

from sweepsearch import SearchParams, build_plan, simulate


def main() -> None:
    args = [float(a) for a in sys.argv[1:]]
    if len(args) >= 4:
        params = SearchParams(R0=args[0], r=args[1], VT=args[2],
                              deltaV=args[3])
        levels = int(args[4]) if len(args) > 4 else 3
    else:
        params = SearchParams(R0=20.0, r=4.0, VT=1.0, deltaV=1.0)
        levels = int(args[0]) if args else 3

    plan = build_plan(params)
    print(f"instance: {params}")
    print(f"planned: N={plan.n_iterations} t_total={plan.t_total:.10g}")
    print("h,escaped,max_overshoot,clean_time,clean_time_rel_err,seconds")
    h = params.r / 20.0
    for _ in range(levels):
        t0 = time.perf_counter()
        result = simulate(plan, h=h)
        wall = time.perf_counter() - t0
        rel = (abs(result.clean_time - plan.t_total) / plan.t_total
               if result.clean_time is not None else float("nan"))
        print(f"{h:.10g},{result.escaped},{result.max_overshoot:.10g},"
              f"{result.clean_time},{rel:.3e},{wall:.1f}")
        h /= 2.0


if __name__ == "__main__":
    main()
