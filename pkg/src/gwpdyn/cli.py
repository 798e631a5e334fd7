"""Command-line front end: evolve, vector-field, wigner, propagate, check.

Exit codes: 0 success, 1 scenario parse error, 2 validation error,
3 numerical failure (blow-up, singular amplitude, kernel focus) or a failed
conservation check. Each failure prints a one-line diagnostic to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import NumericalFailure
from .runner import (
    atomic_write_text,
    check_violations,
    propagate_report,
    run_evolution,
    summary_json_text,
    wigner_snapshots,
    write_summary_json,
    write_timeseries_csv,
)
from .scenario import ScenarioParseError, bundled_scenario_names, load_scenario

PROG = "gwpdyn"


def _out_dir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_times(text: str) -> list[float]:
    try:
        times = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ValueError(f"--times: expected comma-separated numbers, got {text!r}")
    if not times:
        raise ValueError("--times: no times given")
    return times


def cmd_evolve(args) -> int:
    scenario = load_scenario(args.scenario)
    result = run_evolution(scenario)
    out = _out_dir(args)
    csv_path = out / f"{scenario.name}_timeseries.csv"
    json_path = out / f"{scenario.name}_summary.json"
    write_timeseries_csv(result, csv_path)
    write_summary_json(result.summary, json_path)
    written = [csv_path, json_path]
    if scenario.plots:
        from . import plots
        renderers = {
            "moments": plots.moment_traces_svg,
            "correlation": plots.correlation_svg,
            "squeezing": plots.squeezing_svg,
        }
        for name in scenario.plots:
            svg_path = out / f"{scenario.name}_{name}.svg"
            if name == "squeezing":
                renderers[name](result.columns, svg_path,
                                hbar=scenario.system.hbar)
            else:
                renderers[name](result.columns, svg_path)
            written.append(svg_path)
    for path in written:
        print(path)
    return 0


def cmd_vector_field(args) -> int:
    from . import plots
    out = Path(args.output) if args.output else Path(
        f"{args.kind}_field_omega{args.omega0:g}.svg")
    if args.kind == "riccati":
        plots.riccati_vector_field_svg(args.omega0, out)
    else:
        plots.ermakov_vector_field_svg(args.omega0, out)
    print(out)
    return 0


def cmd_wigner(args) -> int:
    from . import plots
    from .wigner import grid_to_binary, grid_to_csv

    scenario = load_scenario(args.scenario)
    times = _parse_times(args.times)
    records = wigner_snapshots(scenario, times)
    out = _out_dir(args)
    index = []
    for k, rec in enumerate(records):
        stem = f"{scenario.name}_wigner_{k:02d}"
        grid_path = out / (stem + (".bin" if args.grid_format == "binary"
                                   else ".csv"))
        if args.grid_format == "binary":
            grid_to_binary(rec["grid"], grid_path)
        else:
            grid_to_csv(rec["grid"], grid_path)
        svg_path = out / (stem + ".svg")
        plots.wigner_heatmap_svg(rec["grid"], svg_path, rec["t"],
                                 peak=rec["peak"])
        index.append({
            "t": rec["t"],
            "grid": grid_path.name,
            "heatmap": svg_path.name,
            "peak_x": rec["peak"][0],
            "peak_p": rec["peak"][1],
            "classical_energy": rec["energy"],
        })
        print(grid_path)
        print(svg_path)
    index_path = out / f"{scenario.name}_wigner_index.json"
    atomic_write_text(index_path,
                      json.dumps(index, sort_keys=True, indent=2) + "\n")
    print(index_path)
    return 0


def cmd_propagate(args) -> int:
    scenario = load_scenario(args.scenario)
    times = _parse_times(args.times) if args.times else None
    report = propagate_report(scenario, times)
    out = _out_dir(args)
    report_path = out / f"{scenario.name}_propagate.json"
    atomic_write_text(report_path, summary_json_text(report))
    print(f"{report['n_points']} points compared "
          f"({report['n_skipped_focal']} skipped near kernel foci); "
          f"max deviations dx={report['max_abs_dx']:.3e} "
          f"dp={report['max_abs_dp']:.3e} dC={report['max_abs_dc']:.3e}")
    print(report_path)
    return 0


def cmd_check(args) -> int:
    scenario = load_scenario(args.scenario)
    result = run_evolution(scenario)
    violations = check_violations(result)
    if violations:
        for line in violations:
            print(f"{PROG}: check failed: {line}", file=sys.stderr)
        return 3
    print(f"{scenario.name}: all conservation checks passed")
    return 0


def cmd_scenarios(_args) -> int:
    for name in bundled_scenario_names():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Gaussian wave-packet dynamics of one-dimensional "
                    "quadratic Hamiltonians: equivalent evolutions, "
                    "invariants, kernels, and phase-space densities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve",
                       help="run a scenario; write time-series CSV and "
                            "summary JSON (plus any requested plots)")
    p.add_argument("scenario", help="scenario file path or bundled name")
    p.add_argument("-o", "--out-dir", default=".", help="output directory")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("vector-field",
                       help="render the flow of one formulation as SVG")
    p.add_argument("kind", choices=("riccati", "ermakov"))
    p.add_argument("--omega0", type=float, required=True,
                   help="constant angular frequency")
    p.add_argument("-o", "--output", default=None, help="output SVG path")
    p.set_defaults(func=cmd_vector_field)

    p = sub.add_parser("wigner",
                       help="phase-space density snapshots at given times")
    p.add_argument("scenario", help="scenario file path or bundled name")
    p.add_argument("--times", required=True,
                   help="comma-separated snapshot times")
    p.add_argument("--grid-format", choices=("csv", "binary"), default="csv",
                   help="grid serialization format (default csv)")
    p.add_argument("-o", "--out-dir", default=".", help="output directory")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("propagate",
                       help="compare kernel-convolution evolution against "
                            "direct integration")
    p.add_argument("scenario", help="scenario file path or bundled name")
    p.add_argument("--times", default=None,
                   help="comma-separated times to evaluate exactly "
                        "(default: scenario grid, skipping kernel foci)")
    p.add_argument("-o", "--out-dir", default=".", help="output directory")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("check",
                       help="run the conservation suite; nonzero exit on "
                            "violation")
    p.add_argument("scenario", help="scenario file path or bundled name")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scenarios", help="list bundled scenario files")
    p.set_defaults(func=cmd_scenarios)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScenarioParseError as exc:
        print(f"{PROG}: {exc}", file=sys.stderr)
        return 1
    except NumericalFailure as exc:
        print(f"{PROG}: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"{PROG}: invalid input: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
