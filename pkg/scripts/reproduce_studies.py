#!/usr/bin/env python3
"""Regenerate the parameter-study data sets as CSV files.

Produces three files in the chosen output directory:

  study_alpha.csv    iterations and cleaning times for alpha in [2, 100]
                     at deltaV = VT
  study_deltav.csv   iterations and cleaning times for deltaV in
                     [0.1 VT, 10 VT] at the reference scale
  study_ratio.csv    ratio of circular to inward advancement time over
                     the same deltaV grid

Usage: python3 scripts/reproduce_studies.py [outdir]
"""

import sys
from pathlib import Path

from sweepsearch import SearchParams, build_plan


def fmt(x) -> str:
    return f"{x:.10g}" if isinstance(x, float) else str(x)


def write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    lines += [",".join(fmt(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path} ({len(rows)} rows)")


def main() -> None:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("studies")
    outdir.mkdir(parents=True, exist_ok=True)

    rows = []
    for a in range(2, 101):
        plan = build_plan(SearchParams(R0=10.0 * a, r=10.0, VT=1.0,
                           deltaV=1.0))
        rows.append([float(a), plan.n_iterations, plan.t_in_total,
                     plan.t_circular_total, plan.t_total])
    write_csv(outdir / "study_alpha.csv",
              ["alpha", "N", "t_in_total", "t_circular_total", "t_total"],
              rows)

    rows = []
    ratio_rows = []
    for k in range(1, 101):
        dv = 0.1 * k
        plan = build_plan(SearchParams(R0=100.0, r=10.0, VT=1.0, deltaV=dv))
        rows.append([dv, plan.n_iterations, plan.t_in_total,
                     plan.t_circular_total, plan.t_total])
        ratio_rows.append([dv, plan.t_circular_total / plan.t_in_total])
    write_csv(outdir / "study_deltav.csv",
              ["deltaV", "N", "t_in_total", "t_circular_total", "t_total"],
              rows)
    write_csv(outdir / "study_ratio.csv",
              ["deltaV", "circ_over_inward"], ratio_rows)


if __name__ == "__main__":
    main()
